//! For F = t^3 + b t^2 + c t + U and offsets (0, 1), disc_t in U is
//! D(U) = -27U^2 + (18bc - 4b^3)U + b^2c^2 - 4c^3, and the second offset
//! gives D(U + 1).
//!
//! Outside characteristic 3, D has a double root iff b^2 = 3c (q pairs), and
//! D(U), D(U + 1) share a root iff the two roots of D differ by 1, i.e.
//! s^3 = 27/4 for some s with s^2 = b^2 - 3c (q pairs per such s).
//! In characteristic 3, D = -b^3 U + b^2c^2 - c^3 is zero for b = c = 0 and
//! constant for b = 0, c != 0.

use hlfq::expcli::field_label;
use hlfq::hlcount::{cr_count_exact, TupleSpec, DEFAULT_BUDGET};
use hlfq::numtheory::odd_prime_powers;
use hlfq::Field;

fn cube_roots_of_27_over_4(f: &Field) -> u64 {
    let target = f.div(f.from_int(27), f.from_int(4));
    f.elements().filter(|&s| f.mul(f.mul(s, s), s) == target).count() as u64
}

#[test]
fn cubic_family_failure_tallies() {
    for q in odd_prime_powers(3, 125) {
        let label = field_label(q).unwrap();
        let f: Field = label.parse().unwrap();
        let rep = cr_count_exact(&TupleSpec::parse(&label, 3, &["0", "1"]).unwrap(), DEFAULT_BUDGET).unwrap();
        let expected = if f.p() == 3 {
            (1, 0, q - 1)
        } else {
            (q, q * cube_roots_of_27_over_4(&f), 0)
        };
        assert_eq!((rep.not_squarefree, rep.not_coprime, rep.constant), expected, "q={label}");
        assert_eq!(rep.admissible, q * q - expected.0 - expected.1 - expected.2);
    }
}

#[test]
fn failures_reach_four_per_q_when_two_is_a_cube() {
    // F_25 contains the cube roots of 2, so N = q^2 - 4q there
    let rep = cr_count_exact(&TupleSpec::parse("5^2", 3, &["0", "1"]).unwrap(), DEFAULT_BUDGET).unwrap();
    assert_eq!(rep.admissible, 625 - 100);
    assert!(rep.density < 1.0 - 3.0 / 25.0);
}
