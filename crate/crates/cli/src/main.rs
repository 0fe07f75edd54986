fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(sinked_fp_cli::run(&argv));
}
