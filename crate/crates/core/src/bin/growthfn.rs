use growthfn::cli;
use growthfn::groebner::CancelToken;

fn main() {
    let cancel = CancelToken::new();
    let handler_token = cancel.clone();
    // a second interrupt falls through to the default behaviour
    let _ = ctrlc::set_handler(move || {
        if handler_token.is_cancelled() {
            std::process::exit(130);
        }
        handler_token.cancel();
    });
    let code = cli::run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
        &cancel,
    );
    std::process::exit(code);
}
