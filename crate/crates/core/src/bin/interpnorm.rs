fn main() {
    std::process::exit(interpnorm::cli::run(std::env::args_os()));
}
