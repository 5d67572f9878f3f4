use hlfq::fqpoly::{enumerate_monic, irreducible_count, SquarefreePolicy};
use hlfq::galois_stats::stickelberger_check;
use hlfq::hlcount::{pi_exact, TupleSpec, DEFAULT_BUDGET};
use hlfq::{Field, FieldElem, Poly, Shard};
use proptest::prelude::*;

const FIELDS: &[&str] = &["3", "5", "7", "3^2", "11", "13"];

fn field(i: usize) -> Field {
    FIELDS[i % FIELDS.len()].parse().unwrap()
}

fn poly_from(f: &Field, raw: &[u32], len: usize) -> Poly {
    let codes: Vec<u32> = raw.iter().take(len).map(|c| c % f.q()).collect();
    Poly::from_codes(f, &codes).unwrap()
}

fn monic_from(f: &Field, raw: &[u32], n: usize) -> Poly {
    let mut codes: Vec<u32> = raw.iter().take(n).map(|c| c % f.q()).collect();
    codes.resize(n, 0);
    codes.push(1);
    Poly::from_codes(f, &codes).unwrap()
}

/// Irreducible iff no monic divisor of degree 1..=deg/2, by plain trial division.
fn irreducible_by_trial(f: &Poly) -> bool {
    let n = f.degree().unwrap();
    for d in 1..=n / 2 {
        for g in enumerate_monic(f.field(), d, Shard::FULL).unwrap() {
            if f.rem(&g).unwrap().is_zero() {
                return false;
            }
        }
    }
    n >= 1
}

fn count(spec: &TupleSpec) -> u64 {
    pi_exact(spec, Shard::FULL, DEFAULT_BUDGET).unwrap().pi.exact().unwrap()
}

fn distinct(offsets: &[Poly]) -> bool {
    (0..offsets.len()).all(|i| (i + 1..offsets.len()).all(|j| offsets[i] != offsets[j]))
}

/// Determinant over the field by Gaussian elimination.
fn det(f: &Field, mut m: Vec<Vec<FieldElem>>) -> FieldElem {
    let size = m.len();
    let mut acc = f.one();
    for k in 0..size {
        let Some(piv) = (k..size).find(|&i| !m[i][k].is_zero()) else {
            return f.zero();
        };
        if piv != k {
            m.swap(piv, k);
            acc = f.neg(acc);
        }
        acc = f.mul(acc, m[k][k]);
        let inv = f.inv(m[k][k]).unwrap();
        for i in k + 1..size {
            let factor = f.mul(m[i][k], inv);
            for j in k..size {
                let v = f.mul(factor, m[k][j]);
                m[i][j] = f.sub(m[i][j], v);
            }
        }
    }
    acc
}

fn sylvester_resultant(a: &Poly, b: &Poly) -> FieldElem {
    let f = a.field();
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    let size = m + n;
    if size == 0 {
        return f.one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![f.zero(); size];
        for k in 0..=m {
            row[i + k] = a.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![f.zero(); size];
        for k in 0..=n {
            row[i + k] = b.coeff(n - k);
        }
        rows.push(row);
    }
    det(f, rows)
}

fn spec_strategy() -> impl Strategy<Value = (usize, usize, Vec<Vec<u32>>)> {
    (0..FIELDS.len(), 2usize..=3, 2usize..=3).prop_flat_map(|(fi, n, r)| {
        (Just(fi), Just(n), prop::collection::vec(prop::collection::vec(any::<u32>(), n), r))
    })
}

fn build(fi: usize, n: usize, raw: &[Vec<u32>]) -> Option<(Field, Vec<Poly>)> {
    let f = field(fi);
    if f.q().pow(n as u32) > 3000 {
        return None;
    }
    let offs: Vec<Poly> = raw.iter().map(|c| poly_from(&f, c, n)).collect();
    distinct(&offs).then_some((f, offs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn count_matches_trial_division((fi, n, raw) in spec_strategy()) {
        let Some((f, offs)) = build(fi, n, &raw) else { return Ok(()) };
        let expected = enumerate_monic(&f, n, Shard::FULL)
            .unwrap()
            .filter(|g| offs.iter().all(|a| irreducible_by_trial(&(g + a))))
            .count() as u64;
        prop_assert_eq!(count(&TupleSpec::new(&f, n, offs)), expected);
    }

    #[test]
    fn common_shift_invariance((fi, n, raw) in spec_strategy(), b in prop::collection::vec(any::<u32>(), 3)) {
        let Some((f, offs)) = build(fi, n, &raw) else { return Ok(()) };
        let b = poly_from(&f, &b, n);
        let shifted: Vec<Poly> = offs.iter().map(|a| a + &b).collect();
        prop_assert_eq!(count(&TupleSpec::new(&f, n, offs)), count(&TupleSpec::new(&f, n, shifted)));
    }

    #[test]
    fn substitution_invariance((fi, n, raw) in spec_strategy(), c in any::<u32>(), lam in any::<u32>()) {
        let Some((f, offs)) = build(fi, n, &raw) else { return Ok(()) };
        let c = f.elem((c % f.q()) as u64).unwrap();
        let moved: Vec<Poly> = offs.iter().map(|a| a.shift(c)).collect();
        prop_assert_eq!(count(&TupleSpec::new(&f, n, offs.clone())), count(&TupleSpec::new(&f, n, moved)));
        // t -> lam t, renormalized to stay monic
        let lam = f.elem((1 + lam % (f.q() - 1)) as u64).unwrap();
        let scale = f.inv(f.pow(lam, n as u64)).unwrap();
        let scaled: Vec<Poly> = offs
            .iter()
            .map(|a| {
                let cs: Vec<FieldElem> = a
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| f.mul(f.mul(x, f.pow(lam, i as u64)), scale))
                    .collect();
                Poly::new(&f, cs)
            })
            .collect();
        prop_assert_eq!(count(&TupleSpec::new(&f, n, offs)), count(&TupleSpec::new(&f, n, scaled)));
    }

    #[test]
    fn permutation_invariance((fi, n, raw) in spec_strategy(), rot in 0usize..3) {
        let Some((f, offs)) = build(fi, n, &raw) else { return Ok(()) };
        let mut perm = offs.clone();
        perm.rotate_left(rot % offs.len());
        perm.reverse();
        prop_assert_eq!(count(&TupleSpec::new(&f, n, offs)), count(&TupleSpec::new(&f, n, perm)));
    }

    #[test]
    fn single_offset_is_gauss_count(fi in 0..FIELDS.len(), n in 1usize..=3, raw in prop::collection::vec(any::<u32>(), 3)) {
        let f = field(fi);
        let a = poly_from(&f, &raw, n);
        let spec = TupleSpec::new(&f, n, vec![a]);
        prop_assert_eq!(count(&spec) as u128, irreducible_count(f.q() as u64, n).unwrap());
    }

    #[test]
    fn shards_partition_the_count((fi, n, raw) in spec_strategy(), total in 1u64..=7) {
        let Some((f, offs)) = build(fi, n, &raw) else { return Ok(()) };
        let spec = TupleSpec::new(&f, n, offs);
        let sum: u64 = Shard::split(total)
            .map(|s| pi_exact(&spec, s, DEFAULT_BUDGET).unwrap().pi.exact().unwrap())
            .sum();
        prop_assert_eq!(sum, count(&spec));
    }

    #[test]
    fn rabin_agrees_with_trial_division(fi in 0..FIELDS.len(), n in 1usize..=4, raw in prop::collection::vec(any::<u32>(), 4)) {
        let f = field(fi);
        let g = monic_from(&f, &raw, n);
        prop_assert_eq!(g.is_irreducible().unwrap(), irreducible_by_trial(&g));
    }

    #[test]
    fn resultant_matches_sylvester_determinant(
        fi in 0..FIELDS.len(),
        a in prop::collection::vec(any::<u32>(), 1..6),
        b in prop::collection::vec(any::<u32>(), 1..6),
    ) {
        let f = field(fi);
        let (a, b) = (poly_from(&f, &a, 6), poly_from(&f, &b, 6));
        prop_assume!(!a.is_zero() && !b.is_zero());
        prop_assert_eq!(a.resultant(&b).unwrap(), sylvester_resultant(&a, &b));
    }

    #[test]
    fn discriminant_zero_iff_repeated_factor(fi in 0..FIELDS.len(), n in 2usize..=5, raw in prop::collection::vec(any::<u32>(), 5)) {
        let f = field(fi);
        let g = monic_from(&f, &raw, n);
        let d = g.discriminant().unwrap();
        let fp = g.derivative();
        let via_sylvester = if fp.is_zero() {
            f.zero()
        } else {
            let r = sylvester_resultant(&g, &fp);
            if (n * (n - 1) / 2) % 2 == 1 { f.neg(r) } else { r }
        };
        prop_assert_eq!(d, via_sylvester);
        prop_assert_eq!(d.is_zero(), !g.is_squarefree().unwrap());
    }

    #[test]
    fn factor_degrees_sum_and_parity(fi in 0..FIELDS.len(), n in 1usize..=6, raw in prop::collection::vec(any::<u32>(), 6)) {
        let f = field(fi);
        let g = monic_from(&f, &raw, n);
        prop_assume!(g.is_squarefree().unwrap());
        let degs = g.factor_degrees(SquarefreePolicy::Reject).unwrap();
        prop_assert_eq!(degs.iter().sum::<usize>(), n);
        prop_assert_eq!(degs.len() == 1, irreducible_by_trial(&g));
        prop_assert!(stickelberger_check(&g).unwrap());
    }

    #[test]
    fn field_axioms(fi in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(fi);
        let q = f.q();
        let (a, b, c) = (f.elem((a % q) as u64).unwrap(), f.elem((b % q) as u64).unwrap(), f.elem((c % q) as u64).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.pow(a, q as u64), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }
}
