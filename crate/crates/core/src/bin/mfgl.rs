fn main() {
    std::process::exit(mfgl::cli::run_from_args(std::env::args_os()));
}
