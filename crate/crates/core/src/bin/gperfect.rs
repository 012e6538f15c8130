fn main() {
    let code = gaussian_perfect::cli::main_with_stdio();
    std::process::exit(code);
}
