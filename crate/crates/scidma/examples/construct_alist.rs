//! Builds a lifted coupled parity-check matrix and writes it in alist format.
//!
//! C1 at L = 50, Z = 1000 yields a 52 000 x 100 000 binary matrix; the alist
//! file lands in the working directory as `c1_l50_z1000.alist`.

use std::fs;

use scidma::{CodeId, LiftingStyle, ParityCheck};

fn main() {
    let cp = CodeId::C1.coupled(50).expect("valid replication");
    let h = ParityCheck::lift(&cp, 1000, 1, LiftingStyle::RandomPermutation)
        .expect("lifting succeeds");
    println!(
        "H: {} rows x {} cols, design rate {:.4}",
        h.num_rows(),
        h.num_cols(),
        cp.design_rate()
    );
    fs::write("c1_l50_z1000.alist", h.to_alist()).expect("write alist");
    println!("wrote c1_l50_z1000.alist");
}
