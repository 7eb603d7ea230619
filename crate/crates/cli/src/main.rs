fn main() {
    std::process::exit(zerok_cli::run(std::env::args_os()));
}
