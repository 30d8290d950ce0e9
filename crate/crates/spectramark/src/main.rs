fn main() {
    std::process::exit(spectramark::cli::run(std::env::args_os()));
}
