fn main() {
    let code = ramop::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
