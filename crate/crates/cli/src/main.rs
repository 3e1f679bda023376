use std::io::Write;

fn main() {
    match cychom_cli::execute(std::env::args_os()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.as_bytes()).expect("write to stdout");
        }
        Err(f) => {
            eprintln!("{}", f.message.trim_end());
            std::process::exit(f.code);
        }
    }
}
