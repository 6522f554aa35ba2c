//! Regenerate `data/conway.txt` from the definition of Conway polynomials.
//!
//!     cargo run --release -p hermcodes --example gen_conway > crates/core/data/conway.txt

use hermcodes::ff::conway::{search, ConwayTable};

fn main() -> hermcodes::Result<()> {
    let wanted: &[(u32, &[u32])] = &[
        (2, &[1, 2, 3, 4, 6, 8, 9, 12, 18]),
        (3, &[1, 2, 3, 4, 6, 8, 12]),
        (5, &[1, 2, 3, 4, 6]),
        (7, &[1, 2, 3, 4, 6]),
        (11, &[1, 2, 3, 4, 6]),
        (13, &[1, 2, 3, 4, 6]),
    ];
    let mut table = ConwayTable::default();
    for &(p, ks) in wanted {
        for &k in ks {
            let c = search(p, k, &table)?;
            eprintln!("C({p},{k}) = {c:?}");
            table.insert_verified(p, k, c)?;
        }
    }
    print!("{}", table.to_text());
    Ok(())
}
