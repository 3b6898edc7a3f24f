fn main() {
    std::process::exit(funbreg_cli::cli::dispatch(std::env::args_os()));
}
