//! Generators for the separating families of languages.

use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarBuilder, Symbol};
use crate::pda::{Action, PdaBuilder, PdaMachine, PdaTransition};

/// `S -> A1 A1, A1 -> A2 A2, .., A(n-1) -> An An, An -> a`: the language
/// `{a^(2^n)}` with n+1 variables.
pub fn witness_ln(n: usize) -> Result<Grammar> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut b = GrammarBuilder::new();
    let mut prev = b.var("S");
    for i in 1..=n {
        let v = b.var(format!("A{i}"));
        b.add(prev, vec![Symbol::Var(v), Symbol::Var(v)]);
        prev = v;
    }
    let a = b.term("a");
    b.add(prev, vec![Symbol::Term(a)]);
    b.build(0)
}

/// The grammar for `{a1^(n0+n1) a2^(n1+n2) .. am^(n(m-1)) : n0 = 2^n, ni >= 1}`
/// with n+4m-3 variables (`An` and `D1` coincide).
pub fn witness_tilde_ln(n: usize, m: usize) -> Result<Grammar> {
    if n == 0 || m < 2 {
        return Err(Error::Precondition("need n >= 1 and m >= 2".into()));
    }
    let mut b = GrammarBuilder::new();
    let s = b.var("S");
    let a: Vec<usize> = (0..n).map(|i| b.var(format!("A{i}"))).collect();
    let bs: Vec<usize> = (1..=m.saturating_sub(2)).map(|i| b.var(format!("B{i}"))).collect();
    let c: Vec<usize> = (1..m).map(|i| b.var(format!("C{i}"))).collect();
    let e: Vec<usize> = (1..m).map(|i| b.var(format!("E{i}"))).collect();
    let d: Vec<usize> = (1..=m).map(|i| b.var(format!("D{i}"))).collect();
    let t: Vec<usize> = (1..=m).map(|i| b.term(format!("a{i}"))).collect();
    let v = Symbol::Var;

    let second = if m == 2 { c[0] } else { bs[0] };
    b.add(s, vec![v(a[0]), v(second)]);
    for i in 0..bs.len() {
        let next = if i + 1 < bs.len() { bs[i + 1] } else { c[m - 2] };
        b.add(bs[i], vec![v(c[i]), v(next)]);
    }
    for i in 0..n {
        let next = if i + 1 < n { a[i + 1] } else { d[0] };
        b.add(a[i], vec![v(next), v(next)]);
    }
    for i in 0..m - 1 {
        b.add(c[i], vec![v(d[i]), v(e[i])]);
        b.add(c[i], vec![v(d[i]), v(d[i + 1])]);
        b.add(e[i], vec![v(c[i]), v(d[i + 1])]);
    }
    for i in 0..m {
        b.add(d[i], vec![Symbol::Term(t[i])]);
    }
    b.build(s)
}

/// Membership in the language of [`witness_tilde_ln`], from its definition.
pub fn tilde_ln_contains(n: usize, exps: &[usize]) -> bool {
    let m = exps.len();
    // n_(m-1) = k_m, then n_(i-1) = k_i - n_i going down.
    let mut ni = exps[m - 1];
    for i in (1..m).rev() {
        if ni < 1 || exps[i - 1] < ni {
            return false;
        }
        ni = exps[i - 1] - ni;
    }
    ni == 1usize << n
}

/// The 1-turn unary machine with 2n+1 states accepting
/// `{a^t : t ≡ 0 mod n and t ≡ 0 mod n+1}`. Blocks of n letters are read in
/// `p_0 .. p_(n-1)`; every block but the last pushes one `X`; the states
/// `r_0 .. r_n` pop and count the pushed symbols modulo n+1.
pub fn witness_lprime(n: usize) -> Result<PdaMachine> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let mut b = PdaBuilder::new();
    let p: Vec<usize> = (0..n).map(|i| b.state(format!("p{i}"))).collect();
    let r: Vec<usize> = (0..=n).map(|i| b.state(format!("r{i}"))).collect();
    let a = b.input("a");
    let z0 = b.stack("Z0");
    let x = b.stack("X");
    for i in 0..n {
        let to = if i + 1 < n { p[i + 1] } else { r[0] };
        b.add(PdaTransition { from: p[i], read: Some(a), top: None, to, action: Action::Stay });
    }
    b.add(PdaTransition { from: r[0], read: None, top: None, to: p[0], action: Action::Push(x) });
    for i in 0..=n {
        b.add(PdaTransition {
            from: r[i],
            read: None,
            top: Some(x),
            to: r[(i + 1) % (n + 1)],
            action: Action::Pop,
        });
    }
    b.add(PdaTransition { from: r[n], read: None, top: Some(z0), to: p[0], action: Action::Stay });
    b.accept(r[n]);
    b.build(r[n], z0, Some(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(witness_ln(4).unwrap().variables().len(), 5);
        assert_eq!(witness_tilde_ln(1, 3).unwrap().variables().len(), 10);
        assert_eq!(witness_tilde_ln(1, 2).unwrap().variables().len(), 6);
        assert_eq!(witness_lprime(3).unwrap().size(), 7);
        assert!(witness_tilde_ln(2, 3).unwrap().is_cnf());
    }

    #[test]
    fn tilde_definition() {
        assert!(tilde_ln_contains(1, &[3, 1]));
        assert!(!tilde_ln_contains(1, &[2, 0]));
        assert!(tilde_ln_contains(1, &[3, 3, 2]));
    }
}
