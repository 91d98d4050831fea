use std::collections::{HashMap, HashSet};

use crate::grammar::{Grammar, Production, Symbol};
use crate::transform::useless::trim;

pub(crate) fn fresh_name(taken: &mut HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

fn taken_names(g: &Grammar) -> HashSet<String> {
    g.variables().iter().chain(g.terminals()).cloned().collect()
}

/// Splits every body longer than two: `A -> X1 .. Xk` becomes
/// `A -> X1 D1, D1 -> X2 D2, .., D(k-2) -> X(k-1) Xk` with fresh `Di`.
pub fn binarize(g: &Grammar) -> Grammar {
    if g.max_body_len() <= 2 {
        return g.clone();
    }
    let mut taken = taken_names(g);
    let mut vars = g.variables().to_vec();
    let mut prods = Vec::with_capacity(g.productions().len());
    let mut counter = 0;
    for p in g.productions() {
        if p.body.len() <= 2 {
            prods.push(p.clone());
            continue;
        }
        let k = p.body.len();
        let mut head = p.head;
        for i in 0..k - 2 {
            counter += 1;
            let d = vars.len();
            vars.push(fresh_name(&mut taken, &format!("D{counter}")));
            prods.push(Production {
                head,
                body: vec![p.body[i], Symbol::Var(d)],
            });
            head = d;
        }
        prods.push(Production {
            head,
            body: vec![p.body[k - 2], p.body[k - 1]],
        });
    }
    Grammar::new(vars, g.terminals().to_vec(), g.start(), prods)
        .expect("binarization keeps indices consistent")
        .with_epsilon_stripped(g.epsilon_stripped())
}

fn is_unit(p: &Production) -> Option<usize> {
    match p.body.as_slice() {
        [Symbol::Var(v)] => Some(*v),
        _ => None,
    }
}

/// Replaces unit productions `A -> B` by the non-unit bodies of every
/// variable reachable from `A` through unit productions.
pub fn eliminate_units(g: &Grammar) -> Grammar {
    if g.productions().iter().all(|p| is_unit(p).is_none()) {
        return g.clone();
    }
    let by_head = g.by_head();
    let mut prods = Vec::new();
    let mut seen = HashSet::new();
    for a in 0..g.variables().len() {
        let mut order = vec![a];
        let mut inside: HashSet<usize> = HashSet::from([a]);
        let mut i = 0;
        while i < order.len() {
            for p in &by_head[order[i]] {
                if let Some(b) = is_unit(p) {
                    if inside.insert(b) {
                        order.push(b);
                    }
                }
            }
            i += 1;
        }
        for &b in &order {
            for p in &by_head[b] {
                if is_unit(p).is_none() {
                    let np = Production {
                        head: a,
                        body: p.body.clone(),
                    };
                    if seen.insert(np.clone()) {
                        prods.push(np);
                    }
                }
            }
        }
    }
    Grammar::new(g.variables().to_vec(), g.terminals().to_vec(), g.start(), prods)
        .expect("unit elimination keeps indices consistent")
        .with_epsilon_stripped(g.epsilon_stripped())
}

/// Merges variables whose production sets coincide once equivalent
/// variables are identified (coarsest such partition). Each class keeps the
/// name of its first member.
pub fn merge_equivalent_variables(g: &Grammar) -> Grammar {
    let n = g.variables().len();
    let by_head = g.by_head();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<Vec<Symbol>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|v| {
                let mut bodies: Vec<Vec<Symbol>> = by_head[v]
                    .iter()
                    .map(|p| {
                        p.body
                            .iter()
                            .map(|&s| match s {
                                Symbol::Var(u) => Symbol::Var(class[u]),
                                t => t,
                            })
                            .collect()
                    })
                    .collect();
                bodies.sort();
                bodies.dedup();
                let k = ids.len();
                *ids.entry((class[v], bodies)).or_insert(k)
            })
            .collect();
        let stable = ids.len() == count;
        count = ids.len();
        class = next;
        if stable {
            break;
        }
    }
    let mut rep = vec![usize::MAX; count];
    let mut vars = Vec::new();
    let mut new_of_class = vec![0; count];
    for v in 0..n {
        if rep[class[v]] == usize::MAX {
            rep[class[v]] = v;
            new_of_class[class[v]] = vars.len();
            vars.push(g.variables()[v].clone());
        }
    }
    let map = |s: Symbol| match s {
        Symbol::Var(u) => Symbol::Var(new_of_class[class[u]]),
        t => t,
    };
    let mut seen = HashSet::new();
    let mut prods = Vec::new();
    for p in g.productions() {
        if rep[class[p.head]] != p.head {
            continue;
        }
        let np = Production {
            head: new_of_class[class[p.head]],
            body: p.body.iter().map(|&s| map(s)).collect(),
        };
        if seen.insert(np.clone()) {
            prods.push(np);
        }
    }
    Grammar::new(vars, g.terminals().to_vec(), new_of_class[class[g.start()]], prods)
        .expect("merging keeps indices consistent")
        .with_epsilon_stripped(g.epsilon_stripped())
}

/// Chomsky normal form of an ε-free grammar, trimmed of useless variables.
pub fn to_cnf(g: &Grammar) -> Grammar {
    if g.is_cnf() {
        return g.clone();
    }
    let g = eliminate_units(g);
    let mut taken = taken_names(&g);
    let mut vars = g.variables().to_vec();
    let mut lifted: HashMap<usize, usize> = HashMap::new();
    let mut prods = Vec::new();
    let mut tail = Vec::new();
    for p in g.productions() {
        if p.body.len() < 2 {
            prods.push(p.clone());
            continue;
        }
        let body = p
            .body
            .iter()
            .map(|&s| match s {
                Symbol::Term(t) => {
                    let v = *lifted.entry(t).or_insert_with(|| {
                        let v = vars.len();
                        vars.push(fresh_name(&mut taken, &format!("T_{}", g.terminals()[t])));
                        tail.push(Production {
                            head: v,
                            body: vec![Symbol::Term(t)],
                        });
                        v
                    });
                    Symbol::Var(v)
                }
                v => v,
            })
            .collect();
        prods.push(Production { head: p.head, body });
    }
    prods.extend(tail);
    let lifted = Grammar::new(vars, g.terminals().to_vec(), g.start(), prods)
        .expect("terminal lifting keeps indices consistent")
        .with_epsilon_stripped(g.epsilon_stripped());
    trim(&binarize(&lifted))
}

/// Removes empty bodies from a raw production list. The returned grammar
/// generates the original language minus the empty word; its flag records
/// whether the empty word was in the language.
pub fn eliminate_epsilon(
    variables: Vec<String>,
    terminals: Vec<String>,
    start: usize,
    productions: Vec<Production>,
) -> Grammar {
    let mut nullable = vec![false; variables.len()];
    loop {
        let mut changed = false;
        for p in &productions {
            if !nullable[p.head]
                && p.body.iter().all(|s| s.as_var().is_some_and(|v| nullable[v]))
            {
                nullable[p.head] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in &productions {
        let opt: Vec<usize> = p
            .body
            .iter()
            .enumerate()
            .filter(|(_, s)| s.as_var().is_some_and(|v| nullable[v]))
            .map(|(i, _)| i)
            .collect();
        assert!(opt.len() < 24, "body with too many nullable symbols");
        for mask in 0u32..(1 << opt.len()) {
            let body: Vec<Symbol> = p
                .body
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    opt.iter()
                        .position(|j| j == i)
                        .map_or(true, |k| mask & (1 << k) == 0)
                })
                .map(|(_, &s)| s)
                .collect();
            if body.is_empty() || body == [Symbol::Var(p.head)] {
                continue;
            }
            let np = Production { head: p.head, body };
            if seen.insert(np.clone()) {
                out.push(np);
            }
        }
    }
    Grammar::new(variables, terminals, start, out)
        .expect("epsilon elimination keeps indices consistent")
        .with_epsilon_stripped(nullable[start])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    #[test]
    fn merges_copies() {
        let g = parse_grammar("start: S\nS -> A B | C B\nA -> a\nC -> a\nB -> b").unwrap();
        let m = merge_equivalent_variables(&g);
        assert_eq!(m.variables().len(), 3);
        assert_eq!(m.productions().len(), 3);
    }

    #[test]
    fn four_symbol_body() {
        let g = parse_grammar("start: A\nA -> X1 X2 X3 X4\nX1 -> a\nX2 -> a\nX3 -> a\nX4 -> a").unwrap();
        let b = binarize(&g);
        assert_eq!(b.variables().len(), g.variables().len() + 2);
        let from_a = b.productions().iter().filter(|p| p.body.len() == 2).count();
        assert_eq!(from_a, 3);
    }

    #[test]
    fn short_bodies_unchanged() {
        let g = parse_grammar("start: S\nS -> A B | a\nA -> a\nB -> b").unwrap();
        assert_eq!(binarize(&g), g);
        assert_eq!(to_cnf(&g), g);
    }

    #[test]
    fn terminal_lifting() {
        let g = parse_grammar("start: A\nA -> a B\nB -> b").unwrap();
        let c = to_cnf(&g);
        assert!(c.is_cnf());
        assert!(c.variables().iter().any(|v| v == "T_a"));
    }

    #[test]
    fn units_removed() {
        let g = parse_grammar("start: S\nS -> A\nA -> B | a\nB -> b").unwrap();
        let u = eliminate_units(&g);
        let bodies: Vec<String> = u
            .productions()
            .iter()
            .filter(|p| p.head == 0)
            .map(|p| u.render_production(p))
            .collect();
        assert_eq!(bodies, ["S -> a", "S -> b"]);
    }

    #[test]
    fn epsilon_flag() {
        let vars = vec!["S".to_string(), "A".to_string()];
        let prods = vec![
            Production { head: 0, body: vec![Symbol::Var(1), Symbol::Term(0)] },
            Production { head: 1, body: vec![] },
            Production { head: 0, body: vec![Symbol::Var(1)] },
        ];
        let g = eliminate_epsilon(vars, vec!["a".into()], 0, prods);
        assert!(g.epsilon_stripped());
        assert!(g.productions().iter().any(|p| p.body == [Symbol::Term(0)]));
    }
}
