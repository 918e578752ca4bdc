use loony::report::ClosedForm;

fn main() {
    let code = loony_cli::run(
        std::env::args_os(),
        &ClosedForm,
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
