use clap::Parser;

fn main() {
    let cli = pongcert_cli::Cli::parse();
    let code = pongcert_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
