fn main() {
    std::process::exit(mhmw_core::cli::run(std::env::args_os()));
}
