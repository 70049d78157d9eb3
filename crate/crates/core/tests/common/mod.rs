#![allow(dead_code)]

use std::path::PathBuf;

use pertinv::io::read_grid_file;
use pertinv::jones::GridKey;
use pertinv::scalar::{int, ratio};
use pertinv::{Component, JonesGrid, SlopeClass, SurgeryPresentation};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/v1")
        .join(name)
}

pub fn knot_grid(name: &str) -> JonesGrid {
    read_grid_file(&fixture(name)).unwrap().to_grid().unwrap()
}

/// The grid of the mirror image: `h -> -h`.
pub fn mirror(g: &JonesGrid) -> JonesGrid {
    let entries = g
        .entries()
        .map(|(k, v)| (k.clone(), if k.n % 2 == 0 { v.clone() } else { -v.clone() }));
    JonesGrid::from_entries(g.components(), g.class(), g.order(), entries).unwrap()
}

pub fn knot_surgery(g: &JonesGrid, p: i64, q: i64) -> SurgeryPresentation {
    SurgeryPresentation::new(
        vec![Component::new(p, q, 0).unwrap()],
        None,
        SlopeClass::Bl,
        g.clone(),
        None,
    )
    .unwrap()
}

pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Random entries everywhere the class and the window allow.
pub fn random_grid(
    rng: &mut ChaCha8Rng,
    components: usize,
    class: SlopeClass,
    order: usize,
) -> JonesGrid {
    let mut entries = vec![(GridKey::new(0, vec![0; components]), int(1))];
    for m in 0..=class.max_m(order) as u32 {
        let multis = compositions(m, components);
        for n in -(2 * m as i32)..=(order as i32 - m as i32) {
            if !class.admits(m, n) || (m == 0 && n <= 1) {
                continue;
            }
            for multi in &multis {
                entries.push((
                    GridKey::new(n, multi.clone()),
                    ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)),
                ));
            }
        }
    }
    JonesGrid::validated(components, class, order, entries).unwrap()
}

pub fn random_components(rng: &mut ChaCha8Rng, n: usize) -> Vec<Component> {
    (0..n)
        .map(|_| loop {
            let (p, q) = (rng.gen_range(-5..=5), rng.gen_range(-4..=4));
            if let Ok(c) = Component::new(p, q, rng.gen_range(-1..=1)) {
                if c.denominator() != 0 {
                    break c;
                }
            }
        })
        .collect()
}
