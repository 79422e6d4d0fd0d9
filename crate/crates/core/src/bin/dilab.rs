fn main() {
    std::process::exit(dirichlet_lab::cli::run(std::env::args_os()));
}
