fn main() {
    std::process::exit(xi_quotient::cli::main_with_args(std::env::args_os()));
}
