fn main() {
    std::process::exit(sccurve_cli::run(std::env::args_os()));
}
