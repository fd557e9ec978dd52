fn main() {
    std::process::exit(gb_forge_cli::run(std::env::args().skip(1)));
}
