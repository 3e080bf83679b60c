fn main() {
    let code = bundle_embed::cli::run(std::env::args_os());
    std::process::exit(code);
}
