fn main() {
    std::process::exit(blockenc_cli::main_with_args(std::env::args_os()));
}
