//! Property tests. Finite groups are checked against brute-force
//! enumeration; everything else against an identity that must hold for all
//! inputs.

use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use proptest::prelude::*;

use homotopy_gauge::abelian::{
    hom_cokernel, hom_kernel, int, iso_check, smith_normal_form, FgAbGroup, GroupHom, Integer,
    Matrix, SparseVec,
};
use homotopy_gauge::complexes::{
    mapping_cone, quasi_iso_check, total_complex, ChainComplex, ChainMap, DoubleComplex, SumMode,
    Truncation,
};
use homotopy_gauge::diagrams::{config_diagram, obs_diagram, verify_diagram, Diagram, Variance};
use homotopy_gauge::gauge::{extended_config, extended_config_direct, PairingContext};
use homotopy_gauge::holimit::holim;
use homotopy_gauge::poset::Poset;
use homotopy_gauge::simplicial::{is_acyclic, star_poset, CoeffGroup, SimplicialComplex};

fn matrix(
    rows: usize,
    cols: usize,
    range: std::ops::RangeInclusive<i64>,
) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(range, cols), rows)
}

fn sized_matrix(
    max: usize,
    range: std::ops::RangeInclusive<i64>,
) -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>)> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| (Just(r), Just(c), matrix(r, c, range.clone())))
}

/// Number of `x` with `d·x = 0`, for every divisor `d` of `q`; this pins
/// down a finite abelian group of exponent dividing `q`.
fn torsion_profile_of(g: &FgAbGroup, q: u64) -> Vec<u64> {
    (1..=q)
        .filter(|d| q.is_multiple_of(*d))
        .map(|d| {
            g.orders()
                .iter()
                .map(|o| {
                    let o = homotopy_gauge::abelian::integer::to_u64(o).expect("finite");
                    gcd(d, o)
                })
                .product()
        })
        .collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn vectors(n: usize, q: u64) -> Vec<Vec<i64>> {
    (0..n)
        .map(|_| 0..q as i64)
        .multi_cartesian_product()
        .collect_vec()
}

fn apply_mod(rows: &[Vec<i64>], x: &[i64], q: u64) -> Vec<i64> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum::<i64>()
                .rem_euclid(q as i64)
        })
        .collect()
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (br, bc) = b.shape();
    let mut entries = Vec::new();
    for (j, col) in a.columns().iter().enumerate() {
        for (i, x) in col.iter() {
            for (l, bcol) in b.columns().iter().enumerate() {
                for (k, y) in bcol.iter() {
                    entries.push((i * br + k, j * bc + l, x * y));
                }
            }
        }
    }
    Matrix::from_entries(a.rows() * br, a.cols() * bc, entries)
}

fn two_term(a: &Matrix) -> ChainComplex {
    ChainComplex::new(
        0,
        vec![FgAbGroup::free(a.rows()), FgAbGroup::free(a.cols())],
        vec![a.clone()],
    )
    .unwrap()
}

fn invariants(c: &ChainComplex) -> Vec<(i64, String)> {
    c.homology()
        .unwrap()
        .into_iter()
        .filter(|(_, g)| !g.is_trivial())
        .map(|(n, g)| (n, g.to_string()))
        .collect()
}

/// Random complexes: facets drawn from subsets of up to five vertices.
fn small_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0usize..5, 1..=3), 1..=4).prop_map(|fs| {
        let fs: Vec<Vec<usize>> = fs.into_iter().map(|s| s.into_iter().collect()).collect();
        let refs: Vec<&[usize]> = fs.iter().map(|f| f.as_slice()).collect();
        SimplicialComplex::from_facets(&refs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factors((r, c, rows) in sized_matrix(5, -12..=12)) {
        let m = Matrix::from_rows(&rows);
        let f = smith_normal_form(&m);
        prop_assert!(f.u.mul(&m).mul(&f.v).sub(&f.s).is_zero());
        prop_assert_eq!(f.s.shape(), (r, c));
        let d = f.diagonal();
        for w in d.windows(2) {
            let divides = if w[0] == int(0) { w[1] == int(0) } else { &w[1] % &w[0] == int(0) };
            prop_assert!(divides, "{} does not divide {}", w[0], w[1]);
        }
        // the transpose has the same invariant factors
        prop_assert_eq!(smith_normal_form(&m.transpose()).diagonal(), d);
    }

    #[test]
    fn invariants_ignore_order(orders in prop::collection::vec(0i64..10, 0..5)) {
        let a = FgAbGroup::from_orders(orders.iter().map(|&o| int(o)).collect());
        let b = FgAbGroup::from_orders(orders.iter().rev().map(|&o| int(o)).collect());
        prop_assert!(iso_check(&a, &b));
        prop_assert!(iso_check(&FgAbGroup::direct_sum(&[&a, &b]), &FgAbGroup::direct_sum(&[&b, &a])));
    }

    #[test]
    fn composition_is_matrix_product(
        a in matrix(3, 2, -5..=5),
        b in matrix(2, 3, -5..=5),
        x in prop::collection::vec(-9i64..=9, 2),
    ) {
        let (z2, z3) = (FgAbGroup::free(2), FgAbGroup::free(3));
        let f = GroupHom::new(&z2, &z3, Matrix::from_rows(&a)).unwrap();
        let g = GroupHom::new(&z3, &z2, Matrix::from_rows(&b)).unwrap();
        let x = SparseVec::from_i64(&x);
        prop_assert_eq!(f.then(&g).unwrap().apply_sparse(&x), g.apply_sparse(&f.apply_sparse(&x)));
        prop_assert!(f.then(&GroupHom::identity(&z3)).unwrap().same_map(&f));
    }

    /// Kernel and cokernel of `Z/q^a → Z/q^b` against enumeration; prime
    /// `q` exercises the field path and composite `q` the lattice path.
    #[test]
    fn kernel_and_cokernel_by_enumeration(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9]),
        (b, a, rows) in sized_matrix(3, 0..=8),
    ) {
        let (src, tgt) = (FgAbGroup::repeated(&int(q as i64), a), FgAbGroup::repeated(&int(q as i64), b));
        let f = GroupHom::new(&src, &tgt, Matrix::from_rows(&rows)).unwrap();
        let (ker, _) = hom_kernel(&f).unwrap();
        let (coker, _) = hom_cokernel(&f).unwrap();

        let image: HashSet<Vec<i64>> = vectors(a, q).iter().map(|x| apply_mod(&rows, x, q)).collect();
        let kernel = vectors(a, q).into_iter().filter(|x| apply_mod(&rows, x, q).iter().all(|&v| v == 0)).collect_vec();
        let divisors = (1..=q).filter(|d| q % d == 0).collect_vec();
        let ker_profile = divisors
            .iter()
            .map(|&d| kernel.iter().filter(|x| x.iter().all(|&v| (v * d as i64) % q as i64 == 0)).count() as u64)
            .collect_vec();
        let coker_profile = divisors
            .iter()
            .map(|&d| {
                let hits = vectors(b, q)
                    .iter()
                    .filter(|y| image.contains(&y.iter().map(|v| (v * d as i64).rem_euclid(q as i64)).collect_vec()))
                    .count();
                (hits / image.len()) as u64
            })
            .collect_vec();
        prop_assert_eq!(torsion_profile_of(&ker, q), ker_profile);
        prop_assert_eq!(torsion_profile_of(&coker, q), coker_profile);
    }

    /// `Tot` of `X ⊗ Y` and of its transpose have the same homology, in both sum modes.
    #[test]
    fn total_complex_of_transpose(a in matrix(2, 2, -3..=3), b in matrix(2, 1, -3..=3)) {
        let (ma, mb) = (Matrix::from_rows(&a), Matrix::from_rows(&b));
        let (x, y) = ([2usize, 2], [2usize, 1]);
        let mut groups = BTreeMap::new();
        let mut horizontal = BTreeMap::new();
        let mut vertical = BTreeMap::new();
        for p in 0..2i64 {
            for q in 0..2i64 {
                groups.insert((p, q), FgAbGroup::free(x[p as usize] * y[q as usize]));
                if q == 1 {
                    horizontal.insert((p, q), kron(&Matrix::identity(x[p as usize]), &mb));
                }
                if p == 1 {
                    vertical.insert((p, q), kron(&ma, &Matrix::identity(y[q as usize])));
                }
            }
        }
        let d = DoubleComplex::new((0, 1), (0, 1), groups, horizontal, vertical).unwrap();
        let t = d.transpose().unwrap();
        let hd = invariants(&total_complex(&d, SumMode::Product, Truncation::NonNegative).unwrap().complex);
        prop_assert_eq!(&hd, &invariants(&total_complex(&t, SumMode::Product, Truncation::NonNegative).unwrap().complex));
        prop_assert_eq!(&hd, &invariants(&total_complex(&d, SumMode::Coproduct, Truncation::NonNegative).unwrap().complex));
    }

    /// `f` is a quasi-isomorphism exactly when its mapping cone is acyclic.
    #[test]
    fn quasi_iso_iff_acyclic_cone(a in matrix(2, 3, -3..=3), c in -3i64..=3, extra in matrix(1, 1, -2..=2)) {
        let x = two_term(&Matrix::from_rows(&a));
        let scaled = ChainMap::new(&x, &x, x.degrees().map(|n| (n, Matrix::identity(x.group(n).ngens()).scaled(&int(c)))).collect()).unwrap();
        prop_assert_eq!(quasi_iso_check(&scaled).unwrap(), mapping_cone(&scaled).unwrap().is_acyclic().unwrap());

        // inclusion of X into X ⊕ Z is a quasi-isomorphism iff Z is acyclic
        let z = two_term(&Matrix::from_rows(&extra));
        let sum = ChainComplex::new(
            0,
            vec![FgAbGroup::free(x.group(0).ngens() + 1), FgAbGroup::free(x.group(1).ngens() + 1)],
            vec![Matrix::block_diag(&[x.differential(1).matrix(), z.differential(1).matrix()])],
        ).unwrap();
        let inc = ChainMap::new(&x, &sum, (0..2).map(|n| {
            let k = x.group(n).ngens();
            (n, Matrix::identity(k).embedded(k + 1, k, 0, 0))
        }).collect()).unwrap();
        let cone_acyclic = mapping_cone(&inc).unwrap().is_acyclic().unwrap();
        prop_assert_eq!(quasi_iso_check(&inc).unwrap(), cone_acyclic);
        prop_assert_eq!(cone_acyclic, z.is_acyclic().unwrap());
    }

    #[test]
    fn linear_order_chains(n in 1usize..7, k in 0usize..4) {
        let p = Poset::linear(n);
        let expected = (0..n).combinations(k + 1).count();
        prop_assert_eq!(p.chains(k).len(), expected);
        prop_assert_eq!(p.opposite().chains(k).len(), expected);
        prop_assert_eq!(p.top(), Some(n - 1));
    }

    /// Stars, diagrams and the gauge layer on random small complexes.
    #[test]
    fn random_complexes(k in small_complex()) {
        let sp = star_poset(&k);
        for u in 0..sp.len() {
            prop_assert!(is_acyclic(&k, sp.sub(u)).unwrap());
            for v in 0..sp.len() {
                prop_assert_eq!(sp.poset().leq(u, v), sp.sub(u).is_subset_of(sp.sub(v)));
            }
        }
        let g = CoeffGroup::cyclic(2).unwrap();
        prop_assert!(verify_diagram(&config_diagram(&sp, g).unwrap()));
        prop_assert!(verify_diagram(&obs_diagram(&sp, g).unwrap()));

        // holim of the constant Z[0] counts components
        let z = ChainComplex::concentrated(0, FgAbGroup::free(1));
        let h = holim(&Diagram::constant(sp.poset(), Variance::Contravariant, &z)).unwrap();
        prop_assert!(h.homology_at(0).unwrap().group().is_isomorphic(&FgAbGroup::free(k.components())));

        // gauge symmetry is locally constant
        for q in [2u64, 3] {
            let g = CoeffGroup::cyclic(q).unwrap();
            let h1 = extended_config(&k, g).unwrap().complex().homology_at(1).unwrap().group().clone();
            prop_assert!(h1.is_isomorphic(&FgAbGroup::repeated(&Integer::from(q), k.components())));
            let direct = extended_config_direct(&k, g).unwrap();
            prop_assert_eq!(invariants(direct.complex()), invariants(extended_config(&k, g).unwrap().complex()));
        }
    }

    #[test]
    fn pairing_relations_and_adjunction(k in small_complex(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let ctx = PairingContext::new(&k, CoeffGroup::cyclic(3).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let b = ctx.random_config(0, &mut rng).unwrap();
            prop_assert_eq!(ctx.relation_failure(&b).unwrap(), None);
        }
        for i in 0..ctx.obs.deg0.ngens() {
            let b = ctx.random_config(1, &mut rng).unwrap();
            prop_assert!(ctx.adjunction_holds(&SparseVec::unit(i), &b));
        }
    }
}
