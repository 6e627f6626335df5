use proptest::prelude::*;
use tecsim_core::cell_complex::*;
use tecsim_core::gf2::BitRow;

/// Planar 5×3 grid of unit squares with squares (1,1) and (3,1) removed as
/// point defects. Edges are `h(x,y)` from (x,y) to (x+1,y) and `v(x,y)` from
/// (x,y) to (x,y+1); the square with lower-left corner (x,y) is `q(x,y)`.
fn punctured_plane() -> CellComplex {
    let mut edges = Vec::new();
    for y in 0..=3 {
        for x in 0..5 {
            edges.push((format!("h({x},{y})"), vec![format!("p({x},{y})"), format!("p({},{y})", x + 1)]));
        }
    }
    for y in 0..3 {
        for x in 0..=5 {
            edges.push((format!("v({x},{y})"), vec![format!("p({x},{y})"), format!("p({x},{})", y + 1)]));
        }
    }
    let mut faces = Vec::new();
    for y in 0..3 {
        for x in 0..5 {
            if (x, y) == (1, 1) || (x, y) == (3, 1) {
                continue;
            }
            faces.push((format!("q({x},{y})"), square(x, y)));
        }
    }
    CellComplex::from_incidence(&[], &faces, &edges).unwrap()
}

fn square(x: usize, y: usize) -> Vec<String> {
    vec![
        format!("h({x},{y})"),
        format!("h({x},{})", y + 1),
        format!("v({x},{y})"),
        format!("v({},{y})", x + 1),
    ]
}

#[test]
fn punctured_plane_cycles() {
    let cx = punctured_plane();
    // outer loop of the 3×3 block around the left defect
    let mut outer = Vec::new();
    for i in 0..3 {
        outer.push(format!("h({i},0)"));
        outer.push(format!("h({i},3)"));
        outer.push(format!("v(0,{i})"));
        outer.push(format!("v(3,{i})"));
    }
    let e1 = cx.chain(EDGE, &outer).unwrap();
    let e2 = cx.chain(EDGE, &square(1, 1)).unwrap();
    let e3 = cx.chain(EDGE, &square(3, 1)).unwrap();
    let mut block = Vec::new();
    for y in 0..3 {
        for x in 0..3 {
            if (x, y) != (1, 1) {
                block.push(format!("q({x},{y})"));
            }
        }
    }
    let f = cx.chain(FACE, &block).unwrap();

    assert_eq!(cx.boundary(&f).unwrap(), &e1 + &e2);
    for e in [&e1, &e2, &e3] {
        assert!(cx.is_closed(e).unwrap());
        assert!(!e.is_empty());
    }
    let witness = cx.homologically_equivalent(&e1, &e2).unwrap().unwrap();
    assert_eq!(cx.boundary(&witness).unwrap(), &e1 + &e2);
    assert!(cx.homologically_equivalent(&e1, &e3).unwrap().is_none());
    assert!(cx.homologically_equivalent(&e2, &e3).unwrap().is_none());
    assert_eq!(cx.betti(EDGE), 2);
}

#[test]
fn g8_two_face_surfaces_split_into_two_classes() {
    let cx = build_g8_complex();
    let space = cx.boundary_space(FACE).unwrap();
    let left = [1, 2, 5];
    let mut classes = std::collections::HashMap::new();
    let mut total = 0;
    for i in 1..=6 {
        for j in i + 1..=6 {
            let s = cx.chain(FACE, &[format!("f{i}"), format!("f{j}")]).unwrap();
            assert!(cx.is_closed(&s).unwrap());
            total += 1;
            let separates = left.contains(&i) != left.contains(&j);
            *classes.entry(space.class_key(&s)).or_insert(0) += 1;
            assert_eq!(space.witness(&s).unwrap().is_none(), separates, "f{i} f{j}");
        }
    }
    assert_eq!(total, 15);
    let mut sizes: Vec<_> = classes.values().copied().collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [6, 9]);
}

fn random_chain(len: usize, dim: usize) -> impl Strategy<Value = Chain> {
    prop::collection::vec(any::<bool>(), len)
        .prop_map(move |bits| {
            let ones = bits.iter().enumerate().filter(|b| *b.1).map(|b| b.0);
            Chain::from_bits(dim, BitRow::from_indices(bits.len(), ones))
        })
}

fn complexes() -> Vec<CellComplex> {
    vec![
        build_elementary_cell(),
        build_g8_complex(),
        build_cuboid_complex(2, 2, 2).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn boundary_of_boundary_vanishes(
        (which, c) in (0usize..3, 2usize..=3).prop_flat_map(|(w, d)| (Just(w), random_chain(complexes()[w].num_cells(d), d)))
    ) {
        let cx = &complexes()[which];
        let once = cx.boundary(&c).unwrap();
        prop_assert!(cx.boundary(&once).unwrap().is_empty());
    }
}

/// Closed 2-chains drawn as boundaries of random volume sets plus an optional
/// fixed nontrivial surface.
fn closed_surface(cx: &CellComplex, volumes: &Chain, extra: Option<&Chain>) -> Chain {
    let mut s = cx.boundary(volumes).unwrap();
    if let Some(e) = extra {
        s.add_assign(e).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn equivalence_relation_on_g8(
        a in random_chain(4, VOLUME), b in random_chain(4, VOLUME), c in random_chain(4, VOLUME),
        ta in any::<bool>(), tb in any::<bool>(), tc in any::<bool>(),
    ) {
        let cx = build_g8_complex();
        let defect = cx.chain(FACE, &["f5", "f6"]).unwrap();
        let pick = |t: bool| if t { Some(&defect) } else { None };
        let (fa, fb, fc) = (
            closed_surface(&cx, &a, pick(ta)),
            closed_surface(&cx, &b, pick(tb)),
            closed_surface(&cx, &c, pick(tc)),
        );
        check_relation(&cx, &fa, &fb, &fc)?;
        prop_assert_eq!(cx.homologically_equivalent(&fa, &fb).unwrap().is_some(), ta == tb);
    }

    #[test]
    fn equivalence_relation_on_cuboid(
        a in random_chain(8, VOLUME), b in random_chain(8, VOLUME), c in random_chain(8, VOLUME),
    ) {
        let cx = build_cuboid_complex(2, 2, 2).unwrap();
        let (fa, fb, fc) = (closed_surface(&cx, &a, None), closed_surface(&cx, &b, None), closed_surface(&cx, &c, None));
        check_relation(&cx, &fa, &fb, &fc)?;
        prop_assert!(cx.homologically_equivalent(&fa, &fb).unwrap().is_some());
    }
}

fn check_relation(cx: &CellComplex, a: &Chain, b: &Chain, c: &Chain) -> Result<(), TestCaseError> {
    let refl = cx.homologically_equivalent(a, a).unwrap();
    prop_assert!(refl.is_some_and(|w| w.is_empty()));
    let ab = cx.homologically_equivalent(a, b).unwrap();
    let ba = cx.homologically_equivalent(b, a).unwrap();
    prop_assert_eq!(ab.is_some(), ba.is_some());
    if let (Some(ab), Some(bc)) = (ab, cx.homologically_equivalent(b, c).unwrap()) {
        let sum = &ab + &bc;
        prop_assert_eq!(cx.boundary(&sum).unwrap(), a + c);
        prop_assert!(cx.homologically_equivalent(a, c).unwrap().is_some());
    }
    Ok(())
}
