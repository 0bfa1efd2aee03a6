fn main() {
    std::process::exit(cmc1::cli::run(std::env::args_os()));
}
