fn main() {
    std::process::exit(hardy_na_cli::run(std::env::args_os()));
}
