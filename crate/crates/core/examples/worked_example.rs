//! The fixed worked example over Z_36, checked value by value.

use ringpir::experiment::cmd_paper_example;

fn main() {
    match cmd_paper_example(true, 0) {
        Ok(report) => print!("{}", report.render()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
