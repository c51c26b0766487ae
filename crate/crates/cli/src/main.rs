fn main() {
    std::process::exit(cbct_cli::run(std::env::args_os()));
}
