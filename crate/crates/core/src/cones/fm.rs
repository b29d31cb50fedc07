//! Fourier–Motzkin elimination, used as an independent feasibility oracle.

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::scalar::Q;

/// Decides whether `{x : a_i · x ≥ b_i ∀i}` is nonempty by eliminating the
/// variables one at a time.
pub fn feasible(rows: &[Vec<Q>], rhs: &[Q]) -> bool {
    let Some(n) = rows.first().map(Vec::len) else { return true };
    let mut sys: Vec<(Vec<Q>, Q)> = rows.iter().cloned().zip(rhs.iter().cloned()).collect();
    for k in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in sys {
            if a[k].is_positive() {
                pos.push((a, b));
            } else if a[k].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // scale to coefficients +1 and -1 on x_k and add
                let sp = ap[k].recip();
                let sn = -an[k].recip();
                let a = linalg::add(&linalg::scale(ap, &sp), &linalg::scale(an, &sn));
                let b = bp * &sp + bn * &sn;
                rest.push((a, b));
            }
        }
        rest.sort();
        rest.dedup();
        sys = rest;
    }
    sys.iter().all(|(a, b)| a.iter().all(Zero::is_zero) && !b.is_positive())
}
