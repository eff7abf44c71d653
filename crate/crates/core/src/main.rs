fn main() {
    std::process::exit(frankel_lab::cli::run());
}
