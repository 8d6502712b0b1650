use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use toric_dioph::approx::{liouville_search, verify_accumulation, Exponent, SearchConfig};
use toric_dioph::arith::{cox_lift, distance, project, salberger_height, CoxPoint, Place, RationalPoint};
use toric_dioph::collections::{accumulating_locus, beta, diagnostics_star, primitive_collections};
use toric_dioph::corpus;
use toric_dioph::curves::{enumerate_positive_relations, general_line, splitting_type, very_free};
use toric_dioph::divisor::{d_sigma, deg_relation, support_function, support_value};
use toric_dioph::exact::{hermite_normal_form, kernel_lattice, lp_strict_feasible, rat, IntMatrix};
use toric_dioph::kleinschmidt::KleinschmidtFan;
use toric_dioph::positivity::{effective_cone, outside_coefficients, positivity};
use toric_dioph::{Error, Fan, PicBasis, Relation, TDivisor};

fn fan(name: &str) -> Fan {
    corpus::by_name(name).unwrap().fan
}

fn kfan(name: &str) -> KleinschmidtFan {
    corpus::by_name(name).unwrap().kleinschmidt.unwrap()
}

fn minus_k(f: &Fan) -> TDivisor {
    TDivisor::anticanonical(f.n_rays())
}

#[test]
fn hnf_of_identity_and_diagonal() {
    let (h, u) = hermite_normal_form(&IntMatrix::identity(2));
    assert_eq!(h, IntMatrix::identity(2));
    assert_eq!(u, IntMatrix::identity(2));
    let m = IntMatrix::from_i64_rows(&[[2, 0], [0, 3]]);
    let (h, u) = hermite_normal_form(&m);
    assert_eq!(h, m);
    assert_eq!(u.det().magnitude(), &One::one());
}

#[test]
fn kernels_of_ray_matrices() {
    let k = kernel_lattice(&fan("p2").ray_matrix());
    assert_eq!(k.to_i64_rows().unwrap(), vec![vec![1, 1, 1]]);
    let s7 = fan("s7");
    let k = kernel_lattice(&s7.ray_matrix());
    assert_eq!(k.rows(), 3);
    let g = s7.ray_matrix();
    for r in 0..3 {
        assert!(g.mul_vec(k.row(r)).iter().all(Zero::is_zero));
    }
    // the CPC relations are relations; saturation puts them in the integer span
    for r in [Relation(vec![1, 0, 1, 0, 0]), Relation(vec![0, 1, 0, 1, 0])] {
        assert!(s7.is_relation(&r));
    }
    assert_eq!(kernel_lattice(&IntMatrix::from_i64_rows(&[[1, 2], [3, 5]])).rows(), 0);
}

#[test]
fn polytope_interiors() {
    // P_D = {m : <m, ray_i> >= -a_i}
    let ineqs = |f: &Fan| -> Vec<Vec<BigRational>> {
        f.rays().iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    };
    let rhs = |d: &TDivisor| -> Vec<BigRational> { d.0.iter().map(|&a| rat(-a)).collect() };
    let p2 = fan("p2");
    assert!(lp_strict_feasible(&ineqs(&p2), &rhs(&TDivisor::prime(3, 2))).feasible);
    assert!(!lp_strict_feasible(&ineqs(&p2), &rhs(&TDivisor(vec![0, 0, 0]))).feasible);
    let f2 = fan("f2");
    let w = lp_strict_feasible(&ineqs(&f2), &rhs(&minus_k(&f2)));
    assert!(w.feasible);
    let m = w.witness.unwrap();
    for r in f2.rays() {
        let v: BigRational = r.iter().zip(&m).map(|(&x, y)| rat(x) * y).sum();
        assert!(v > rat(-1));
    }
}

#[test]
fn s7_without_a_cone_is_not_complete() {
    let s7 = fan("s7");
    let cones: Vec<Vec<usize>> = s7.max_cones().iter().filter(|c| **c != [2, 3]).cloned().collect();
    let broken = Fan::new(2, s7.rays().to_vec(), cones).unwrap();
    assert!(!broken.is_smooth_complete());
    assert!(broken.report().issues.iter().any(|e| matches!(e, Error::FacetUnpaired { .. })));
}

#[test]
fn locating_cones() {
    let (c, coords) = fan("p2").locate_cone_i64(&[1, 1]).unwrap();
    assert_eq!((fan("p2").cone(c), coords), (&[0usize, 1][..], vec![1, 1]));
    let s7 = fan("s7");
    assert_eq!(s7.locate_cone_i64(&[0, 0]).unwrap().1, vec![0, 0]);
    let (c, coords) = s7.locate_cone_i64(&[2, 1]).unwrap();
    assert_eq!(s7.cone(c), &[0, 4]);
    assert_eq!(coords, vec![1, 1]);
}

#[test]
fn wall_counts_and_relations() {
    let p2 = fan("p2");
    let walls = p2.walls().unwrap();
    assert_eq!(walls.len(), 3);
    assert!(walls.iter().all(|w| w.relation == Relation(vec![1, 1, 1])));
    let f1 = fan("f1");
    let walls = f1.walls().unwrap();
    assert_eq!(walls.len(), 4);
    // F1 rays: -e1, e1, e2, e1 - e2
    let w = walls.iter().find(|w| w.rays == [2]).unwrap();
    assert_eq!(w.relation, Relation(vec![1, 1, 0, 0]));
    assert_eq!(fan("s7").walls().unwrap().len(), 5);
}

#[test]
fn picard_ranks() {
    let p2 = fan("p2");
    let pic = PicBasis::new(&p2).unwrap();
    assert_eq!(pic.rank(), 1);
    let classes: Vec<Vec<i64>> = (0..3).map(|i| pic.class_of_ray(i)).collect();
    assert!(classes.iter().all(|c| c == &classes[0]));
    assert_eq!(PicBasis::new(&fan("s7")).unwrap().rank(), 3);
    for e in corpus::all().into_iter().filter(|e| e.kleinschmidt.is_some()) {
        assert_eq!(PicBasis::new(&e.fan).unwrap().rank(), 2, "{}", e.name);
    }
}

#[test]
fn support_functions() {
    let p2 = fan("p2");
    assert_eq!(support_function(&p2, &TDivisor::prime(3, 2), 0).unwrap(), vec![0, 0]);
    for e in corpus::all() {
        let k = minus_k(&e.fan);
        for r in e.fan.rays() {
            let v: Vec<BigRational> = r.iter().map(|&x| rat(x)).collect();
            assert_eq!(support_value(&e.fan, &k, &v).unwrap(), rat(-1));
        }
    }
    let f1 = fan("f1");
    assert_eq!(support_value(&f1, &minus_k(&f1), &[rat(2), rat(1)]).unwrap(), rat(-3));
}

#[test]
fn degrees_of_relations() {
    let s7 = fan("s7");
    assert_eq!(deg_relation(&s7, &minus_k(&s7), &Relation(vec![1, 0, 1, 0, 0])).unwrap(), 2);
    assert_eq!(deg_relation(&fan("p2"), &TDivisor::prime(3, 2), &Relation(vec![1, 1, 1])).unwrap(), 1);
    let f1 = kfan("f1");
    assert_eq!(deg_relation(f1.fan(), &minus_k(f1.fan()), &f1.c3()).unwrap(), 3);
}

#[test]
fn globally_generated_representatives() {
    let s7 = fan("s7");
    // sigma0 = cone(-e1, -e2)
    assert_eq!(d_sigma(&s7, &minus_k(&s7), 3).unwrap(), TDivisor(vec![2, 2, 0, 0, 3]));
    let p2 = fan("p2");
    for c in 0..3 {
        let ds = d_sigma(&p2, &TDivisor::prime(3, 2), c).unwrap();
        for &i in p2.cone(c) {
            assert_eq!(ds.0[i], 0);
        }
        assert_eq!(ds.0.iter().sum::<i64>(), 1);
    }
}

#[test]
fn positivity_flags() {
    let p2 = fan("p2");
    let r = positivity(&p2, &TDivisor::prime(3, 2)).unwrap();
    assert!(r.nef && r.ample && r.big);
    let r = positivity(&p2, &TDivisor(vec![0, 0, -1])).unwrap();
    assert!(!r.nef && !r.ample && !r.big);
    let f2 = fan("f2");
    let r = positivity(&f2, &minus_k(&f2)).unwrap();
    assert!(r.nef && !r.ample && r.big);
}

#[test]
fn effective_cones() {
    let s7 = effective_cone(&fan("s7")).unwrap();
    assert_eq!(s7.extreme.len(), 3);
    assert!(s7.simplicial);
    assert_eq!(s7.sigma0.map(|c| fan("s7").cone(c).to_vec()), Some(vec![2, 3]));
    let s6 = effective_cone(&fan("s6")).unwrap();
    assert_eq!((s6.extreme.len(), s6.picard_rank), (6, 4));
    assert!(!s6.simplicial && s6.sigma0.is_none() && s6.consistent);
    for e in corpus::all() {
        if let Some(k) = e.kleinschmidt {
            let r = effective_cone(&e.fan).unwrap();
            assert!(r.simplicial, "{}", e.name);
            assert!(r.sigma0.is_some());
            // several cones may qualify; the normal-form one always does
            let outside = outside_coefficients(&e.fan, k.sigma0());
            assert!(outside.iter().all(|(_, b)| b.iter().all(|&x| x >= 0)), "{}", e.name);
        }
    }
}

#[test]
fn primitive_collections_of_small_fans() {
    let p2 = primitive_collections(&fan("p2")).unwrap();
    assert_eq!(p2.collections.len(), 1);
    assert_eq!(p2.collections[0].rays, vec![0, 1, 2]);
    assert!(p2.collections[0].centred);
    let s7 = primitive_collections(&fan("s7")).unwrap();
    let centred: Vec<Vec<usize>> = s7.centred().map(|c| c.rays.clone()).collect();
    assert_eq!(centred, vec![vec![0, 2], vec![1, 3]]);
    let mut others: Vec<Vec<usize>> = s7.collections.iter().filter(|c| !c.centred).map(|c| c.rays.clone()).collect();
    others.sort();
    assert_eq!(others, vec![vec![0, 1], vec![2, 4], vec![3, 4]]);
    // {e1, e2} sums to the ray e1 + e2
    let c01 = s7.collections.iter().find(|c| c.rays == [0, 1]).unwrap();
    assert_eq!(c01.sum.as_ref().unwrap().terms, vec![(4, 1)]);
    let f1 = primitive_collections(&fan("f1")).unwrap();
    let c = f1.collections.iter().find(|c| c.rays == [0, 1]).unwrap();
    assert!(c.centred);
    let c = f1.collections.iter().find(|c| c.rays == [2, 3]).unwrap();
    assert!(!c.centred);
}

#[test]
fn beta_values() {
    assert_eq!(beta(&fan("s7"), &minus_k(&fan("s7"))).unwrap().beta, 2);
    for (name, n) in [("p2", 2), ("p3", 3)] {
        let f = fan(name);
        assert_eq!(beta(&f, &minus_k(&f)).unwrap().beta, n + 1);
    }
    assert_eq!(beta(&fan("f1"), &minus_k(&fan("f1"))).unwrap().beta, 2);
}

#[test]
fn accumulating_loci() {
    let s7 = fan("s7");
    let y = accumulating_locus(&s7, &minus_k(&s7)).unwrap();
    let free: Vec<Vec<usize>> = y.components.iter().map(|c| c.free.clone()).collect();
    assert_eq!(free, vec![vec![0], vec![1]]);
    assert!(y.meets_only_at_base_point());
    assert_eq!(accumulating_locus(&fan("p2"), &TDivisor::prime(3, 2)), Err(Error::IsProjectiveSpace));
    let f1 = fan("f1");
    let y = accumulating_locus(&f1, &minus_k(&f1)).unwrap();
    assert_eq!(y.components.len(), 1);
    assert_eq!(y.components[0].cardinality, 2);
}

#[test]
fn star_diagnostics() {
    let s7 = fan("s7");
    assert!(diagnostics_star(&s7, &minus_k(&s7)).unwrap().all_pass());
    for e in corpus::all().into_iter().filter(|e| e.kleinschmidt.is_some()) {
        let k = minus_k(&e.fan);
        if positivity(&e.fan, &k).unwrap().nef {
            assert!(diagnostics_star(&e.fan, &k).unwrap().all_pass(), "{}", e.name);
        }
    }
    let s6 = fan("s6");
    assert_eq!(diagnostics_star(&s6, &minus_k(&s6)), Err(Error::HypothesisStarFails));
}

#[test]
fn positive_relations() {
    let rels = enumerate_positive_relations(&fan("p2"), 3).unwrap();
    assert_eq!(rels, vec![Relation(vec![1, 1, 1]), Relation(vec![2, 2, 2]), Relation(vec![3, 3, 3])]);
    let f1 = kfan("f1");
    let rels = enumerate_positive_relations(f1.fan(), 2).unwrap();
    let mut pq: Vec<(i64, i64)> = rels
        .iter()
        .map(|r| {
            let (p, q) = (r.0[0], r.0[3]);
            assert_eq!(r, &f1.c1().scale(p).add(&f1.c2().scale(q)));
            (p, q)
        })
        .collect();
    pq.sort();
    assert_eq!(pq, vec![(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]);
    let s7 = fan("s7");
    let k = minus_k(&s7);
    let min = enumerate_positive_relations(&s7, 2)
        .unwrap()
        .iter()
        .map(|r| deg_relation(&s7, &k, r).unwrap())
        .min();
    assert_eq!(min, Some(2));
}

#[test]
fn very_free_classes() {
    assert!(!very_free(&fan("s7"), &Relation(vec![1, 0, 1, 0, 0])).unwrap());
    let f0 = kfan("f0");
    assert!(very_free(f0.fan(), &Relation(vec![1, 1, 1, 1])).unwrap());
    assert!(!very_free(f0.fan(), &f0.c3()).unwrap());
    assert!(very_free(f0.fan(), &f0.c1().add(&f0.c3())).unwrap());
}

#[test]
fn splitting_types() {
    assert_eq!(splitting_type(&fan("p2"), &Relation(vec![1, 1, 1]), 1).unwrap().degrees, vec![1, 2]);
    assert_eq!(splitting_type(&fan("s7"), &Relation(vec![1, 0, 1, 0, 0]), 1).unwrap().degrees, vec![0, 2]);
    for a in 1..=3 {
        let k = KleinschmidtFan::build(1, 1, &[a]).unwrap();
        let mut expected = vec![a, 2];
        expected.sort();
        assert_eq!(splitting_type(k.fan(), &k.c3(), 1).unwrap().degrees, expected);
    }
}

#[test]
fn general_line_classes() {
    let p2 = fan("p2");
    assert_eq!(general_line(&p2, 0, &[1, 2]).unwrap().class, Relation(vec![1, 1, 1]));
    let s7 = fan("s7");
    let l = general_line(&s7, 3, &[1, -1]).unwrap();
    assert_eq!(deg_relation(&s7, &minus_k(&s7), &l.class).unwrap(), 3);
    let f1 = kfan("f1");
    let l = general_line(f1.fan(), f1.sigma0(), &[2, 3]).unwrap();
    assert_eq!(l.class, f1.c3());
}

#[test]
fn cox_lifts() {
    let p2 = fan("p2");
    let p = RationalPoint::from_fractions(0, &[(2, 3), (4, 5)]);
    assert_eq!(cox_lift(&p2, &p).unwrap(), CoxPoint(vec![10.into(), 12.into(), 15.into()]));
    assert_eq!(salberger_height(&p2, &TDivisor::prime(3, 2), &p).unwrap(), BigInt::from(15));
    let q0 = RationalPoint::from_fractions(0, &[(1, 1), (1, 1)]);
    assert_eq!(cox_lift(&p2, &q0).unwrap(), CoxPoint(vec![BigInt::one(); 3]));
    // S7 in the chart of cone(-e1, -e2): y1 = X2 / (X0 X4), y2 = X3 / (X1 X4)
    let s7 = fan("s7");
    let p = RationalPoint::from_fractions(3, &[(-7, 12), (5, 18)]);
    let x = cox_lift(&s7, &p).unwrap();
    let y1 = BigRational::new(x.0[2].clone(), &x.0[0] * &x.0[4]);
    let y2 = BigRational::new(x.0[3].clone(), &x.0[1] * &x.0[4]);
    assert_eq!(vec![y1, y2], p.coords);
    assert_eq!(project(&s7, 3, &x).unwrap(), p);
}

#[test]
fn heights_at_the_base_point() {
    for e in corpus::all() {
        let k = minus_k(&e.fan);
        if !positivity(&e.fan, &k).unwrap().nef {
            continue;
        }
        let q0 = RationalPoint::new(0, vec![BigRational::one(); e.fan.dim()]);
        assert_eq!(salberger_height(&e.fan, &k, &q0).unwrap(), BigInt::one(), "{}", e.name);
        assert!(distance(&q0, Place::Infinity).unwrap().is_zero());
    }
}

#[test]
fn distances() {
    let p = RationalPoint::from_fractions(0, &[(3, 2), (1, 1)]);
    assert_eq!(distance(&p, Place::Infinity).unwrap(), BigRational::new(1.into(), 2.into()));
    let p = RationalPoint::from_fractions(0, &[(26, 1), (1, 1)]);
    assert_eq!(distance(&p, Place::Prime(5)).unwrap(), BigRational::new(1.into(), 25.into()));
}

#[test]
fn projective_plane_search_stabilizes() {
    let p2 = fan("p2");
    let mut cfg = SearchConfig::new(0, Exponent::integer(1), 40);
    cfg.checkpoints = vec![10, 20, 40];
    let r = liouville_search(&p2, &TDivisor::prime(3, 2), &cfg).unwrap();
    let mins: Vec<BigRational> = r.stabilization.iter().map(|b| b.minimum.as_ref().unwrap().power.clone()).collect();
    assert_eq!(mins.len(), 3);
    assert!(mins.iter().all(|m| *m > BigRational::zero()));
    assert_eq!(mins[0], mins[2]);
}

#[test]
fn accumulation_not_applicable_on_projective_space() {
    assert!(matches!(
        verify_accumulation(&fan("p2"), &TDivisor::prime(3, 2), 10, Place::Infinity),
        Err(Error::NotApplicable(_))
    ));
}

#[test]
fn kleinschmidt_examples() {
    let f1 = KleinschmidtFan::build(1, 1, &[1]).unwrap();
    assert_eq!((f1.fan().n_rays(), f1.fan().n_cones()), (4, 4));
    let f0 = KleinschmidtFan::build(1, 1, &[0]).unwrap();
    let p1xp1 = Fan::new(2, vec![vec![-1, 0], vec![1, 0], vec![0, 1], vec![0, -1]], f0.fan().max_cones().to_vec()).unwrap();
    assert_eq!(f0.fan(), &p1xp1);
    let k = KleinschmidtFan::build(2, 1, &[2]).unwrap();
    assert_eq!((k.fan().dim(), k.fan().n_rays()), (3, 5));

    let f2 = kfan("f2");
    let p = f2.positivity_rank2(&minus_k(f2.fan())).unwrap();
    assert_eq!((p.a, p.b), (2, 4));
    assert!(p.nef && !p.ample && p.big);
    assert!(f1.positivity_rank2(&minus_k(f1.fan())).unwrap().ample);
    let p = f2.positivity_rank2(&TDivisor::prime(4, 1)).unwrap();
    assert_eq!((p.a, p.b), (1, 0));
    assert!(!p.nef && !p.big);

    let e = f1.ess_constant(&minus_k(f1.fan())).unwrap();
    assert_eq!((e.value, e.class_name), (3, "C3"));
    let e = f0.ess_constant(&minus_k(f0.fan())).unwrap();
    assert_eq!((e.value, e.class_name), (4, "C1+C3"));
    let e = f2.ess_constant(&minus_k(f2.fan())).unwrap();
    assert_eq!((e.value, e.class_name), (4, "C3"));
    assert_eq!(f2.ess_constant(&TDivisor::prime(4, 1)), Err(Error::NotBigNef));
}
