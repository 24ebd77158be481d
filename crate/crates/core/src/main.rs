fn main() {
    std::process::exit(lambdasup::cli_main());
}
