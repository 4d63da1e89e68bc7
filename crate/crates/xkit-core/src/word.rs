//! Freely reduced words in a free group.
//!
//! A [`FreeWord`] is a sequence of letters, each a generator index paired
//! with an exponent sign. Words are kept freely reduced at all times: no
//! adjacent pair `x·x⁻¹` or `x⁻¹·x` survives construction, and the empty
//! word is the identity.

use std::fmt;

/// One letter of a word: a generator index and an exponent sign (`±1`).
pub type Letter = (usize, i8);

/// A freely reduced word in a free group on indexed generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

/// Freely reduces a letter sequence. Returns the unique reduced word equal
/// to the input; idempotent and length-nonincreasing.
pub fn free_reduce(letters: &[Letter]) -> FreeWord {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    for &(g, s) in letters {
        debug_assert!(s == 1 || s == -1, "letter sign must be ±1");
        match stack.last() {
            Some(&(h, t)) if h == g && t == -s => {
                stack.pop();
            }
            _ => stack.push((g, s)),
        }
    }
    FreeWord { letters: stack }
}

impl FreeWord {
    /// The empty word.
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// The single-letter word for generator `g`.
    pub fn generator(g: usize) -> Self {
        FreeWord { letters: vec![(g, 1)] }
    }

    /// Builds a word from raw letters, reducing as needed.
    pub fn from_letters(letters: &[Letter]) -> Self {
        free_reduce(letters)
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut letters = self.letters.clone();
        for &(g, s) in &other.letters {
            match letters.last() {
                Some(&(h, t)) if h == g && t == -s => {
                    letters.pop();
                }
                _ => letters.push((g, s)),
            }
        }
        FreeWord { letters }
    }

    pub fn inv(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|&(g, s)| (g, -s)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Conjugate `p⁻¹·w·p` (right-action convention).
    pub fn conjugate(&self, p: &FreeWord) -> FreeWord {
        p.inv().mul(self).mul(p)
    }

    /// Renders with the given generator names, `1` for the identity.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, s)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "g{}", g)?;
            if s < 0 {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Display adaptor carrying generator names.
pub struct WordDisplay<'a> {
    word: &'a FreeWord,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.word.letters(), |g| {
            self.names.get(g).map(|s| s.as_str()).unwrap_or("?")
        })
    }
}

/// Writes a letter sequence as `x*y^-2*x`, collapsing runs into powers.
pub(crate) fn write_letters<'a>(
    f: &mut fmt::Formatter<'_>,
    letters: &[Letter],
    name: impl Fn(usize) -> &'a str,
) -> fmt::Result {
    if letters.is_empty() {
        return write!(f, "1");
    }
    let mut first = true;
    let mut i = 0;
    while i < letters.len() {
        let (g, s) = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == (g, s) {
            j += 1;
        }
        let count = (j - i) as i64 * s as i64;
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if count == 1 {
            write!(f, "{}", name(g))?;
        } else {
            write!(f, "{}^{}", name(g), count)?;
        }
        i = j;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(usize, i8)]) -> FreeWord {
        FreeWord::from_letters(letters)
    }

    #[test]
    fn reduce_identity_case() {
        assert!(w(&[(0, 1), (0, -1)]).is_identity());
    }

    #[test]
    fn reduce_single_cancellation() {
        // x·y·y⁻¹·x -> x·x
        assert_eq!(w(&[(0, 1), (1, 1), (1, -1), (0, 1)]), w(&[(0, 1), (0, 1)]));
    }

    #[test]
    fn reduce_cascading_cancellation() {
        // x·y⁻¹·y·x⁻¹·z -> z
        assert_eq!(
            w(&[(0, 1), (1, -1), (1, 1), (0, -1), (2, 1)]),
            FreeWord::generator(2)
        );
    }

    #[test]
    fn inverse_and_conjugate() {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let c = x.conjugate(&y);
        assert_eq!(c, y.inv().mul(&x).mul(&y));
        assert!(c.mul(&c.inv()).is_identity());
    }

    /// All raw letter sequences of length ≤ `max_len` over `gens` generators
    /// (both signs), visiting `f` on each.
    fn for_all_raw(gens: usize, max_len: usize, f: &mut impl FnMut(&[Letter])) {
        let alphabet: Vec<Letter> = (0..gens)
            .flat_map(|g| [(g, 1i8), (g, -1i8)])
            .collect();
        let mut current: Vec<Letter> = Vec::new();
        fn rec(
            alphabet: &[Letter],
            current: &mut Vec<Letter>,
            max_len: usize,
            f: &mut impl FnMut(&[Letter]),
        ) {
            f(current);
            if current.len() == max_len {
                return;
            }
            for &l in alphabet {
                current.push(l);
                rec(alphabet, current, max_len, f);
                current.pop();
            }
        }
        rec(&alphabet, &mut current, max_len, f);
    }

    #[test]
    fn reduce_is_idempotent_and_multiplicative_exhaustive() {
        // free_reduce(u·v) == free_reduce(free_reduce(u)·free_reduce(v)) for
        // all words up to length 8 over 2 generators: split every raw word of
        // length ≤ 8 at every point.
        for_all_raw(2, 8, &mut |raw| {
            let reduced = free_reduce(raw);
            assert!(reduced.len() <= raw.len());
            assert_eq!(free_reduce(reduced.letters()), reduced);
            for split in 0..=raw.len() {
                let (u, v) = raw.split_at(split);
                let direct = {
                    let mut all = u.to_vec();
                    all.extend_from_slice(v);
                    free_reduce(&all)
                };
                assert_eq!(direct, free_reduce(u).mul(&free_reduce(v)));
            }
        });
    }
}
