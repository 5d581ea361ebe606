#![allow(dead_code)]

use copermanental::perm::permanent_naive;
use copermanental::pipeline::{run_builtin, Kind, LevelResult, PipelineConfig};
use copermanental::{
    canonical_form, char_poly, char_poly_leibniz, perm_poly, perm_poly_symbolic, permanent_ryser,
    Graph, IntMatrix,
};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_2024;

pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let p = rng.gen_range(0.1..0.9);
    let mut g = Graph::empty(n).unwrap();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

pub fn level(n: usize, kind: Kind) -> LevelResult {
    run_builtin(
        n,
        None,
        PipelineConfig {
            kind,
            ..Default::default()
        },
    )
    .unwrap()
}

/// Every class on `1..=max_n` vertices.
pub fn graphs_upto(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(|n| copermanental::enumerate::Generator::new(n).unwrap().all())
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn ryser_matches_naive(count: usize) -> Result<(), String> {
    let mut rng = rng(1);
    for i in 0..count {
        let k = rng.gen_range(0..=7);
        let m = IntMatrix::from_fn(k, |_, _| rng.gen_range(-3..=3));
        let fast = permanent_ryser(&m).map_err(|e| e.to_string())?;
        let slow = permanent_naive(&m).map_err(|e| e.to_string())?;
        ensure(BigInt::from(fast) == slow, || {
            format!("matrix {i} ({k}x{k}): ryser {fast}, naive {slow}")
        })?;
    }
    Ok(())
}

/// Kernel against symbolic expansion on every graph with at most `max_n` vertices.
pub fn kernels_match_symbolic(max_n: usize) -> Result<usize, String> {
    let graphs = graphs_upto(max_n);
    for g in &graphs {
        let word = copermanental::to_graph6(g);
        let p = perm_poly(g).map_err(|e| e.to_string())?;
        let ps = perm_poly_symbolic(g).map_err(|e| e.to_string())?;
        ensure(p == ps, || format!("{word}: perm {p} vs symbolic {ps}"))?;
        let c = char_poly(g).map_err(|e| e.to_string())?;
        let cs = char_poly_leibniz(g).map_err(|e| e.to_string())?;
        ensure(c == cs, || format!("{word}: char {c} vs Leibniz {cs}"))?;
    }
    Ok(graphs.len())
}

/// Monic, no `x^{n-1}` term, `x^{n-2}` equal to `m` (perm) or `-m` (char),
/// and permanental coefficients alternating in sign.
pub fn coefficient_invariants(max_n: usize) -> Result<usize, String> {
    let graphs = graphs_upto(max_n);
    for g in &graphs {
        let word = copermanental::to_graph6(g);
        let n = g.n();
        let m = g.edge_count().get() as i128;
        let p = perm_poly(g).map_err(|e| e.to_string())?;
        let c = char_poly(g).map_err(|e| e.to_string())?;
        for (label, q, sign) in [("perm", &p, 1), ("char", &c, -1)] {
            ensure(q.degree() == n && q.is_monic(), || {
                format!("{word}: {label} {q} not monic of degree {n}")
            })?;
            if n >= 1 {
                ensure(q.coeff(n - 1) == 0, || {
                    format!("{word}: {label} x^{{n-1}} coefficient nonzero")
                })?;
            }
            if n >= 2 {
                ensure(q.coeff(n - 2) == sign * m, || {
                    format!("{word}: {label} x^{{n-2}} coefficient vs m={m}")
                })?;
            }
        }
        for k in 0..=n {
            let signed = if (n - k) % 2 == 0 {
                p.coeff(k)
            } else {
                -p.coeff(k)
            };
            ensure(signed >= 0, || {
                format!("{word}: perm coefficient of x^{k} has the wrong sign in {p}")
            })?;
        }
    }
    Ok(graphs.len())
}

pub fn relabeling_invariance(count: usize) -> Result<(), String> {
    let mut rng = rng(2);
    for i in 0..count {
        let n = rng.gen_range(1..=9);
        let g = random_graph(&mut rng, n);
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(&mut rng);
        let h = g.permute(&sigma).unwrap();
        let word = copermanental::to_graph6(&g);
        ensure(perm_poly(&g).unwrap() == perm_poly(&h).unwrap(), || {
            format!("case {i}: perm differs for {word}")
        })?;
        ensure(char_poly(&g).unwrap() == char_poly(&h).unwrap(), || {
            format!("case {i}: char differs for {word}")
        })?;
        ensure(
            canonical_form(&g).unwrap() == canonical_form(&h).unwrap(),
            || format!("case {i}: canonical form differs for {word}"),
        )?;
    }
    Ok(())
}

pub fn union_multiplicativity(count: usize) -> Result<(), String> {
    let mut rng = rng(3);
    for i in 0..count {
        let a = rng.gen_range(1..=8);
        let b = rng.gen_range(1..=9 - a);
        let g = random_graph(&mut rng, a);
        let h = random_graph(&mut rng, b);
        let u = g.disjoint_union(&h).unwrap();
        let (wg, wh) = (copermanental::to_graph6(&g), copermanental::to_graph6(&h));
        let prod = perm_poly(&g).unwrap().mul(&perm_poly(&h).unwrap());
        ensure(perm_poly(&u).unwrap() == prod, || {
            format!("pair {i}: perm of {wg} + {wh}")
        })?;
        let prod = char_poly(&g).unwrap().mul(&char_poly(&h).unwrap());
        ensure(char_poly(&u).unwrap() == prod, || {
            format!("pair {i}: char of {wg} + {wh}")
        })?;
    }
    Ok(())
}
