fn main() {
    std::process::exit(polydyn::run());
}
