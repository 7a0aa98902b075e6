fn main() {
    std::process::exit(ws_carnot::cli::main_with_args(std::env::args_os()));
}
