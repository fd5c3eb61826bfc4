//! Expected jump-deformation graphs: the degeneration data transcribed
//! from the source catalogs, with family chains instantiated at fixed
//! parameter samples and the whole arrow set closed under transitivity.
//! An arrow "a" -> "b" means a jumps to b; equivalently b contracts to a.

use std::collections::BTreeSet;

use super::data::{normalize_params, CatalogId};
use crate::scalar::Scalar;

/// Render a node name: the short label with canonical parameters.
pub fn node_name(label: &str, canonical_params: &[Scalar]) -> String {
    let short = label.split_once(':').map(|(_, s)| s).unwrap_or(label);
    let base = short.split_once('(').map(|(s, _)| s).unwrap_or(short);
    if canonical_params.is_empty() {
        base.to_string()
    } else {
        let joined: Vec<String> = canonical_params.iter().map(|p| p.to_string()).collect();
        format!("{}({})", base, joined.join(":"))
    }
}

fn fam(label: &str, params: &[i64]) -> String {
    let p: Vec<Scalar> = params.iter().map(|&x| Scalar::from_int(x)).collect();
    let canon = normalize_params(label, &p).expect("static sample parameters are valid");
    node_name(label, &canon)
}

/// The base jump arrows, before transitive closure.
fn base_arrows(id: CatalogId) -> Vec<(String, String)> {
    let mut arrows: Vec<(String, String)> = Vec::new();
    let mut arrow = |a: String, b: String| arrows.push((a, b));
    match id {
        CatalogId::C3 => {
            let d2f = |l: i64, m: i64| fam("3C:d2(λ:μ)", &[l, m]);
            // d1 jumps to every family point and to d3 (but never to d2)
            for (l, m) in [(1, 1), (1, -1), (0, 1), (1, 2), (1, 3), (2, 3)] {
                arrow("d1".into(), d2f(l, m));
            }
            arrow("d1".into(), "d3".into());
            arrow("d2".into(), d2f(1, 1));
            arrow(d2f(1, -1), "d3".into());
        }
        CatalogId::R3 => {
            let df = |l: i64, m: i64| fam("3R:d(λ:μ)", &[l, m]);
            arrow(df(1, 0), "sl2R".into());
            arrow(df(-1, 0), "sl2R".into());
            arrow(df(-1, 0), "su2".into());
        }
        CatalogId::C4 => {
            let d3f = |l: i64, m: i64, n: i64| fam("4C:d3(λ:μ:ν)", &[l, m, n]);
            let d1f = |l: i64, m: i64| fam("4C:d1(λ:μ)", &[l, m]);
            let d3p = |l: i64, m: i64| fam("4C:d3(λ:μ)", &[l, m]);
            arrow("d1".into(), "d2*".into());
            // sl2(C)+C chain
            arrow("d2*".into(), d3f(1, -1, 0));
            arrow(d3f(1, -1, 0), d1f(1, -1));
            arrow(d1f(1, -1), "d3".into());
            // r2+r2 chain
            arrow("d2*".into(), d3f(1, 0, 1));
            arrow(d3f(1, 0, 1), d1f(1, 0));
            arrow(d1f(1, 0), "d2#".into());
            // the two chains into d1(1:1)
            arrow("d2*".into(), d3f(1, 1, 2));
            arrow(d3f(1, 1, 2), d1f(1, 1));
            arrow("d1".into(), "d1#".into());
            arrow("d1#".into(), d1f(1, 1));
            // generic d1(λ:μ) chain at parameter samples
            for (l, m) in [(1, 2), (1, 3), (1, 4)] {
                arrow("d2*".into(), d3f(l, m, l + m));
                arrow(d3f(l, m, l + m), d1f(l, m));
            }
            // d3(λ:λ:μ) chain at parameter samples
            for (l, m) in [(1, 2), (1, 3), (1, 4)] {
                arrow("d2*".into(), d3p(l, m));
                arrow(d3p(l, m), d3f(l, l, m));
            }
            // generic d3(λ:μ:ν) samples
            for (l, m, n) in [(1, 2, 5), (1, 3, 5), (1, 4, 6)] {
                arrow("d2*".into(), d3f(l, m, n));
            }
            // the special contraction of d3(1:1)
            arrow("d3*".into(), d3p(1, 1));
        }
    }
    arrows
}

/// The expected degeneration graph: base arrows closed under
/// transitivity, sorted and deduplicated.
pub fn expected_graph(id: CatalogId) -> Vec<(String, String)> {
    let base = base_arrows(id);
    let mut set: BTreeSet<(String, String)> = base.into_iter().collect();
    loop {
        let mut added = false;
        let snapshot: Vec<(String, String)> = set.iter().cloned().collect();
        for (a, b) in &snapshot {
            for (c, d) in &snapshot {
                if b == c && a != d && set.insert((a.clone(), d.clone())) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    set.into_iter().collect()
}

/// Labels contracted to by the given node: sources of incoming jumps.
pub fn expected_contractions(id: CatalogId, node: &str) -> Vec<String> {
    expected_graph(id)
        .into_iter()
        .filter(|(_, b)| b == node)
        .map(|(a, _)| a)
        .collect()
}

/// DOT rendering with jump arrows in the deformation direction.
pub fn graph_to_dot(id: CatalogId, arrows: &[(String, String)]) -> String {
    let name = match id {
        CatalogId::C3 => "moduli3c",
        CatalogId::R3 => "moduli3r",
        CatalogId::C4 => "moduli4c",
    };
    let mut out = String::new();
    out.push_str(&format!("digraph {} {{\n", name));
    for (a, b) in arrows {
        out.push_str(&format!("  \"{}\" -> \"{}\" [kind=\"jump\"];\n", a, b));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_reverse_arrows() {
        for id in [CatalogId::C3, CatalogId::R3, CatalogId::C4] {
            let g = expected_graph(id);
            let set: BTreeSet<_> = g.iter().cloned().collect();
            for (a, b) in &g {
                assert!(!set.contains(&(b.clone(), a.clone())), "{} <-> {}", a, b);
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn transitivity_closed() {
        for id in [CatalogId::C3, CatalogId::R3, CatalogId::C4] {
            let g = expected_graph(id);
            let set: BTreeSet<_> = g.iter().cloned().collect();
            for (a, b) in &g {
                for (c, d) in &g {
                    if b == c && a != d {
                        assert!(set.contains(&(a.clone(), d.clone())));
                    }
                }
            }
        }
    }

    #[test]
    fn paper_chains_present() {
        let g = expected_graph(CatalogId::C4);
        let set: BTreeSet<_> = g.iter().cloned().collect();
        let d11 = fam("4C:d1(λ:μ)", &[1, 1]);
        assert!(set.contains(&("d1".to_string(), "d1#".to_string())));
        assert!(set.contains(&("d1#".to_string(), d11.clone())));
        assert!(set.contains(&("d1".to_string(), d11)));
        assert!(set.contains(&("d3*".to_string(), fam("4C:d3(λ:μ)", &[1, 1]))));
        // 3C: d2 jumps to d2(1:1) but not conversely
        let g3 = expected_graph(CatalogId::C3);
        let set3: BTreeSet<_> = g3.iter().cloned().collect();
        let d211 = fam("3C:d2(λ:μ)", &[1, 1]);
        assert!(set3.contains(&("d2".to_string(), d211.clone())));
        assert!(!set3.contains(&(d211, "d2".to_string())));
    }
}
