fn main() {
    std::process::exit(qpms_cli::run(std::env::args_os()));
}
