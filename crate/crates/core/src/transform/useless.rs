use crate::error::{Error, Result};
use crate::grammar::{Grammar, Production, Symbol};

/// Variables that derive some terminal string.
pub fn productive(g: &Grammar) -> Vec<bool> {
    let mut prod = vec![false; g.variables().len()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            if !prod[p.head]
                && p.body.iter().all(|s| match *s {
                    Symbol::Var(v) => prod[v],
                    Symbol::Term(_) => true,
                })
            {
                prod[p.head] = true;
                changed = true;
            }
        }
        if !changed {
            return prod;
        }
    }
}

/// Variables reachable from `root` through productions whose symbols all
/// satisfy `allowed`.
pub fn reachable(g: &Grammar, root: usize, allowed: &[bool]) -> Vec<bool> {
    let by_head = g.by_head();
    let mut seen = vec![false; g.variables().len()];
    if !allowed[root] {
        return seen;
    }
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(a) = stack.pop() {
        for p in &by_head[a] {
            if p.body.iter().any(|s| s.as_var().is_some_and(|v| !allowed[v])) {
                continue;
            }
            for v in p.body.iter().filter_map(|s| s.as_var()) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    seen
}

/// Keeps the variables flagged in `keep` (the start is always kept) and the
/// productions over them. Terminals are preserved.
pub(crate) fn restrict(g: &Grammar, keep: &[bool]) -> Grammar {
    let mut map = vec![usize::MAX; g.variables().len()];
    let mut vars = Vec::new();
    for (i, v) in g.variables().iter().enumerate() {
        if keep[i] || i == g.start() {
            map[i] = vars.len();
            vars.push(v.clone());
        }
    }
    let prods = g
        .productions()
        .iter()
        .filter(|p| {
            map[p.head] != usize::MAX
                && p.body
                    .iter()
                    .all(|s| s.as_var().map_or(true, |v| map[v] != usize::MAX))
        })
        .map(|p| Production {
            head: map[p.head],
            body: p
                .body
                .iter()
                .map(|&s| match s {
                    Symbol::Var(v) => Symbol::Var(map[v]),
                    t => t,
                })
                .collect(),
        })
        .collect();
    Grammar::new(vars, g.terminals().to_vec(), map[g.start()], prods)
        .expect("restriction keeps indices consistent")
        .with_epsilon_stripped(g.epsilon_stripped())
}

/// Removes unproductive and unreachable variables. If the language is empty
/// the result is the start symbol without productions.
pub fn trim(g: &Grammar) -> Grammar {
    let prod = productive(g);
    let reach = reachable(g, g.start(), &prod);
    let keep: Vec<bool> = (0..prod.len()).map(|v| prod[v] && reach[v]).collect();
    restrict(g, &keep)
}

/// Removes useless variables; fails when the language is empty.
pub fn remove_useless(g: &Grammar) -> Result<Grammar> {
    if !productive(g)[g.start()] {
        return Err(Error::EmptyLanguage(g.start_name().to_string()));
    }
    Ok(trim(g))
}
