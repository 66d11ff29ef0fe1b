fn main() {
    std::process::exit(gammalab::run(std::env::args_os()));
}
