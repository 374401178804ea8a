use metahecke::blocks::{classify, semidirect_orders, Ambient, BlockDescriptor, CuspidalLine};
use metahecke::rootdata::generate_group;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AMBIENTS: [Ambient; 7] = [
    Ambient::Mp,
    Ambient::Sp,
    Ambient::SoOdd,
    Ambient::SoEven,
    Ambient::OEven,
    Ambient::U,
    Ambient::Gl,
];

fn random_descriptor(rng: &mut ChaCha8Rng) -> BlockDescriptor {
    let ambient = AMBIENTS[rng.gen_range(0..AMBIENTS.len())];
    let h_rank = if ambient == Ambient::Gl {
        0
    } else {
        rng.gen_range(0..=2)
    };
    let lines = (0..rng.gen_range(1..=2))
        .map(|_| {
            let self_dual = rng.gen_bool(0.7);
            CuspidalLine::new(
                rng.gen_range(1..=3),
                rng.gen_range(1..=3),
                rng.gen_bool(0.6),
                self_dual && rng.gen_bool(0.5),
                self_dual,
                rng.gen_bool(0.5),
            )
        })
        .collect();
    BlockDescriptor {
        ambient,
        h_rank,
        lines,
        extra_r_generators: vec![],
    }
}

/// |W(M,O)| = |R|·|W_O| checked against an independent enumeration of the
/// group generated by W_O and the R-generators, on 20 valid descriptors.
#[test]
fn semidirect_product_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 20 {
        let bd = random_descriptor(&mut rng);
        let Ok(cb) = classify(&bd) else { continue };
        let (w, r, wmo) = semidirect_orders(&cb).unwrap();
        assert_eq!(w * r, wmo);
        let d = cb.datum().unwrap();
        let w_o: Vec<_> = (0..d.num_simple())
            .map(|i| d.simple_reflection(i))
            .collect();
        assert_eq!(
            generate_group(cb.rank, &w_o, 1 << 20).unwrap().len() as u128,
            w,
            "{bd:?}"
        );
        assert_eq!(
            generate_group(cb.rank, &cb.r_generators, 1 << 20)
                .unwrap()
                .len() as u128,
            r,
            "{bd:?}"
        );
        let mut all = w_o.clone();
        all.extend(cb.r_generators.iter().cloned());
        assert_eq!(
            generate_group(cb.rank, &all, 1 << 20).unwrap().len() as u128,
            wmo,
            "{bd:?}"
        );
        // R permutes the positive system.
        for g in &cb.r_generators {
            for p in d.base_roots() {
                assert_eq!(d.root_sign(&g.act(&p.root)), Some(true), "{bd:?}");
            }
        }
        checked += 1;
    }
}
