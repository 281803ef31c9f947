fn main() {
    std::process::exit(bellcorr::cli::main_with_args(std::env::args_os()));
}
