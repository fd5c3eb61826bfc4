fn main() {
    std::process::exit(codiff::run_cli());
}
