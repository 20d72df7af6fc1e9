//! Every module for every field size up to 9, compared against the reference table.

use modlift::classify::{classification_table, mismatches, render_text, TableOptions};
use modlift::lift::DirectClosure;

fn main() -> modlift::Result<()> {
    let options = TableOptions { timings: true, ..TableOptions::default() };
    let rows = classification_table(&options, &DirectClosure::default())?;
    print!("{}", render_text(&rows));
    let total: u64 = rows.iter().filter_map(|r| r.wall_ms).sum();
    println!("{} cells, {total} ms of work", rows.len());
    for m in mismatches(&rows)? {
        println!("differs from reference: {}({}) expected {}, got {}", m.module, m.q, m.expected, m.actual);
    }
    Ok(())
}
