fn main() {
    std::process::exit(knotstat::cli::run(std::env::args_os()));
}
