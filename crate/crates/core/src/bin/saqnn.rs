fn main() {
    std::process::exit(saqnn::cli::run(std::env::args_os()));
}
