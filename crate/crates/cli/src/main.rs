fn main() {
    std::process::exit(bellgame_cli::run());
}
