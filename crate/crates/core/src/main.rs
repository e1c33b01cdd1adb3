fn main() {
    std::process::exit(microgarch::cli::run_from_args(std::env::args_os()));
}
