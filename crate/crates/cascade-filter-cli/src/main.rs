fn main() {
    std::process::exit(cascade_filter_cli::execute(std::env::args_os()));
}
