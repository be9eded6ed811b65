use ringpir::experiment::{cmd_bounds, render_bounds, TABLE_ONE};

fn main() -> ringpir::error::Result<()> {
    let mut rows = TABLE_ONE.to_vec();
    rows.push((5, 3, 2));
    print!("{}", render_bounds(&cmd_bounds(&rows)?));
    Ok(())
}
