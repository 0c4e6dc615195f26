//! Lookup decoding, nearest-key decoding under syndrome noise, and
//! localization of the logical qubits that carry errors.

use serde::Serialize;

use crate::classical::{BchDecoder, ClassicalCode, StandardArray};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::product::{ErrorPattern, LookupTable, Mode, ProductCode, ProductSyndrome};

/// Burkhard–Keller tree over bit strings under Hamming distance.
#[derive(Debug, Clone)]
pub struct BkTree {
    keys: Vec<BitVector>,
    nodes: Vec<BkNode>,
}

#[derive(Debug, Clone)]
struct BkNode {
    key: usize,
    children: Vec<(usize, usize)>,
}

/// Keys within the query radius, as `(key index, distance)` in visiting order,
/// plus the number of nodes whose distance was evaluated.
#[derive(Debug, Clone, Default)]
pub struct BkMatches {
    pub matches: Vec<(usize, usize)>,
    pub visited: usize,
}

impl BkTree {
    /// Keys keep their positions, so match indices refer into `keys`.
    /// Repeated keys are stored once.
    pub fn build(keys: Vec<BitVector>) -> Self {
        let mut tree = Self {
            keys,
            nodes: Vec::new(),
        };
        for i in 0..tree.keys.len() {
            tree.insert(i);
        }
        tree
    }

    fn insert(&mut self, key: usize) {
        if self.nodes.is_empty() {
            self.nodes.push(BkNode {
                key,
                children: Vec::new(),
            });
            return;
        }
        let mut at = 0;
        loop {
            let d = self.keys[self.nodes[at].key].hamming_distance(&self.keys[key]);
            if d == 0 {
                return;
            }
            match self.nodes[at].children.iter().find(|&&(cd, _)| cd == d) {
                Some(&(_, child)) => at = child,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(BkNode {
                        key,
                        children: Vec::new(),
                    });
                    self.nodes[at].children.push((d, id));
                    return;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn key(&self, i: usize) -> &BitVector {
        &self.keys[i]
    }

    pub fn query(&self, key: &BitVector, radius: usize) -> BkMatches {
        let mut out = BkMatches::default();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(at) = stack.pop() {
            let node = &self.nodes[at];
            let d = self.keys[node.key].hamming_distance(key);
            out.visited += 1;
            if d <= radius {
                out.matches.push((node.key, d));
            }
            // triangle inequality: only edges with |edge - d| ≤ radius can lead to matches
            for &(edge, child) in &node.children {
                if edge + radius >= d && edge <= d + radius {
                    stack.push(child);
                }
            }
        }
        out
    }
}

pub fn bk_build(keys: Vec<BitVector>) -> BkTree {
    BkTree::build(keys)
}

pub fn bk_query(tree: &BkTree, key: &BitVector, radius: usize) -> BkMatches {
    tree.query(key, radius)
}

fn check_key_len(table: &LookupTable, syn: &BitVector) -> Result<()> {
    let expected = table.header.key_bits();
    if syn.len() != expected {
        return Err(Error::Length {
            op: "lookup",
            expected,
            actual: syn.len(),
        });
    }
    Ok(())
}

/// Exact-match lookup; `None` means the syndrome is not a table key.
pub fn lookup_decode<'t>(table: &'t LookupTable, syn: &BitVector) -> Result<Option<&'t ErrorPattern>> {
    check_key_len(table, syn)?;
    Ok(table.get(syn))
}

/// Outcome of a nearest-key search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nearest {
    /// A single key at minimal distance.
    Decoded { correction: ErrorPattern, distance: usize },
    /// Several keys share the minimal distance; carries their table indices.
    Ambiguous { distance: usize, candidates: Vec<usize> },
    /// No key lies within the search radius.
    NotFound,
}

/// Default radius `t_C - t_src` recorded in the table header.
pub fn default_radius(table: &LookupTable) -> usize {
    table.header.t_c - table.header.t_src
}

/// Nearest table key to a noisy syndrome, searched with the table's BK-tree.
/// Ties are reported, not broken.
pub fn min_distance_decode(table: &LookupTable, syn_noisy: &BitVector, max_radius: usize) -> Result<Nearest> {
    check_key_len(table, syn_noisy)?;
    if let Some(e) = table.get(syn_noisy) {
        return Ok(Nearest::Decoded {
            correction: e.clone(),
            distance: 0,
        });
    }
    let found = table.bk_index().query(syn_noisy, max_radius);
    let Some(best) = found.matches.iter().map(|&(_, d)| d).min() else {
        return Ok(Nearest::NotFound);
    };
    let mut at_best: Vec<usize> = found
        .matches
        .iter()
        .filter(|&&(_, d)| d == best)
        .map(|&(i, _)| i)
        .collect();
    if at_best.len() > 1 {
        at_best.sort_unstable();
        return Ok(Nearest::Ambiguous {
            distance: best,
            candidates: at_best,
        });
    }
    Ok(Nearest::Decoded {
        correction: table.entry(at_best[0]).1.clone(),
        distance: best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    /// Every row decoded to logical-qubit positions only.
    Exact,
    /// Some row needed syndrome-bit corrections as well.
    Nearest,
}

/// Logical qubits (0-based) found to carry errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationResult {
    pub logical_indices: Vec<usize>,
    pub per_row_supports: Vec<Vec<usize>>,
    /// Syndrome bits each row decoder attributed to measurement flips.
    pub syndrome_flips: Vec<Vec<usize>>,
    pub confidence: Confidence,
}

/// Syndrome decoder of the classical code, shared by every row of `Ξ`.
#[derive(Debug, Clone)]
pub enum RowDecoder {
    Standard { array: StandardArray, t: usize },
    Bch(BchDecoder),
}

impl RowDecoder {
    /// Berlekamp–Massey for BCH codes, the standard array otherwise.
    pub fn for_code(c: &ClassicalCode) -> Result<Self> {
        if c.is_bch() {
            Ok(RowDecoder::Bch(BchDecoder::new(c)?))
        } else {
            Ok(RowDecoder::Standard {
                array: StandardArray::build(c)?,
                t: c.t(),
            })
        }
    }

    /// Error support (full-code positions) of weight ≤ `t` with the given
    /// syndrome, or `None` when no such error exists. BCH codes are in
    /// `[I | Pᵀ]` layout, so `[s | 0]` is a word with syndrome `s`.
    pub fn decode_syndrome(&self, s: &BitVector, n: usize) -> Result<Option<Vec<usize>>> {
        match self {
            RowDecoder::Standard { array, t } => {
                let support = array.leader_support(s)?;
                Ok((support.len() <= *t).then_some(support))
            }
            RowDecoder::Bch(dec) => {
                let mut word = BitVector::zeros(n);
                for i in s.iter_ones() {
                    word.set(i, true);
                }
                dec.decode(&word)
            }
        }
    }
}

/// Row-by-row decoder for product syndromes of one product code.
#[derive(Debug, Clone)]
pub struct Localizer<'a> {
    pc: &'a ProductCode,
    rows: RowDecoder,
}

impl<'a> Localizer<'a> {
    pub fn new(pc: &'a ProductCode) -> Result<Self> {
        if (pc.mode() == Mode::Systematic || pc.classical().is_bch()) && !pc.classical().is_standard_systematic() {
            return Err(Error::NotSystematic);
        }
        Ok(Self {
            pc,
            rows: RowDecoder::for_code(pc.classical())?,
        })
    }

    /// Zero-message Berlekamp–Massey localizer; needs a BCH code in `Pᵀ` mode.
    pub fn bm(pc: &'a ProductCode) -> Result<Self> {
        if !pc.classical().is_bch() || pc.mode() != Mode::Systematic {
            return Err(Error::Unsupported(format!(
                "zero-message localization needs a BCH code in Pᵀ mode, got {}",
                pc.classical_id()
            )));
        }
        Self::new(pc)
    }

    /// Decode every row of `Ξ` as a classical syndrome.
    ///
    /// In plain mode a row is `H_C·u` for the indicator `u` of the logical
    /// qubits hit by that check. In `Pᵀ` mode the row is the parity part of
    /// the codeword `[u·P | u]`, so decoding `[Ξ_i | 0]` finds `u` in the
    /// message positions and any syndrome-bit flips in the parity positions.
    pub fn localize(&self, xi: &ProductSyndrome) -> Result<LocalizationResult> {
        let pc = self.pc;
        if xi.matrix.shape() != (pc.m(), pc.r()) {
            return Err(Error::dims("localize", xi.matrix.shape(), (pc.m(), pc.r())));
        }
        let c = pc.classical();
        let mut per_row = Vec::with_capacity(pc.m());
        let mut flips = Vec::with_capacity(pc.m());
        let mut all = vec![false; pc.l()];
        for i in 0..pc.m() {
            let support = self
                .rows
                .decode_syndrome(&xi.row(i), c.n())?
                .ok_or(Error::RowDecode { row: i })?;
            let (logical, parity): (Vec<usize>, Vec<usize>) = match pc.mode() {
                Mode::Plain => (support, Vec::new()),
                Mode::Systematic => {
                    let r = c.r();
                    let (par, msg): (Vec<usize>, Vec<usize>) = support.into_iter().partition(|&p| p < r);
                    (msg.into_iter().map(|p| p - r).collect(), par)
                }
            };
            for &l in &logical {
                all[l] = true;
            }
            per_row.push(logical);
            flips.push(parity);
        }
        let confidence = if flips.iter().all(|f| f.is_empty()) {
            Confidence::Exact
        } else {
            Confidence::Nearest
        };
        Ok(LocalizationResult {
            logical_indices: (0..pc.l()).filter(|&l| all[l]).collect(),
            per_row_supports: per_row,
            syndrome_flips: flips,
            confidence,
        })
    }
}

/// Decode each row of `Ξ` with the classical code (standard array, or
/// Berlekamp–Massey for BCH codes).
pub fn localize_rows(pc: &ProductCode, xi: &ProductSyndrome) -> Result<LocalizationResult> {
    Localizer::new(pc)?.localize(xi)
}

/// Zero-message Berlekamp–Massey localization of a possibly noisy syndrome.
pub fn localize_bm(pc: &ProductCode, xi_noisy: &ProductSyndrome) -> Result<LocalizationResult> {
    Localizer::bm(pc)?.localize(xi_noisy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bch, hamming};
    use crate::gf2::Combinations;
    use crate::quantum::{rep3, steane, ErrorType};

    fn lcg(seed: &mut u64) -> u64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *seed >> 11
    }

    #[test]
    fn bk_matches_linear_scan() {
        let mut s = 7u64;
        let keys: Vec<BitVector> = (0..10_000)
            .map(|_| BitVector::from_u64(40, lcg(&mut s)))
            .collect();
        let tree = BkTree::build(keys.clone());
        for q in 0..100 {
            let probe = if q % 2 == 0 {
                keys[(lcg(&mut s) % 10_000) as usize].clone()
            } else {
                BitVector::from_u64(40, lcg(&mut s))
            };
            let radius = (q % 4) as usize;
            let mut got: Vec<usize> = tree.query(&probe, radius).matches.iter().map(|m| m.0).collect();
            got.sort_unstable();
            let mut want: Vec<usize> = (0..keys.len())
                .filter(|&i| keys[i].hamming_distance(&probe) <= radius)
                .collect();
            // duplicates collapse onto the first copy
            want.retain(|&i| keys.iter().position(|k| *k == keys[i]) == Some(i));
            assert_eq!(got, want);
        }
        let hit = tree.query(&keys[3], 0);
        assert_eq!(hit.matches, vec![(3, 0)]);
    }

    #[test]
    fn bk_prunes_on_separated_keys() {
        // codewords of [15,5,7]: pairwise distance ≥ 7
        let c = bch(4, 3).unwrap();
        let keys: Vec<BitVector> = (0u64..32).map(|m| c.encode(&BitVector::from_u64(5, m)).unwrap()).collect();
        let tree = BkTree::build(keys.clone());
        let probe = keys[9].xor(&BitVector::from_support(15, &[0]));
        let res = tree.query(&probe, 1);
        assert_eq!(res.matches, vec![(9, 1)]);
        assert!(res.visited < keys.len());
    }

    fn h3_rep3() -> ProductCode {
        ProductCode::new(hamming(3).unwrap(), rep3(), Mode::Systematic, ErrorType::X).unwrap()
    }

    #[test]
    fn lookup_h3_rep3() {
        let pc = h3_rep3();
        let t = pc.build_lookup_table().unwrap();
        assert!(lookup_decode(&t, &BitVector::zeros(6)).unwrap().unwrap().is_zero());
        let x2 = ErrorPattern::parse("X2", 3, 4, ErrorType::X).unwrap();
        let syn = pc.extract_syndrome(&x2).unwrap().flattened();
        assert_eq!(lookup_decode(&t, &syn).unwrap().unwrap().to_string(), "X2");
        let x1x10 = ErrorPattern::parse("X1X10", 3, 4, ErrorType::X).unwrap();
        let syn = pc.extract_syndrome(&x1x10).unwrap().flattened();
        assert_eq!(lookup_decode(&t, &syn).unwrap().unwrap().to_string(), "X7");
        assert!(lookup_decode(&t, &BitVector::zeros(5)).is_err());
        assert_eq!(min_distance_decode(&t, &syn, 0).unwrap(), Nearest::Decoded {
            correction: ErrorPattern::parse("X7", 3, 4, ErrorType::X).unwrap(),
            distance: 0
        });
    }

    fn desk() -> ProductCode {
        ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Systematic, ErrorType::X)
            .unwrap()
            .with_t_src(1)
            .unwrap()
    }

    #[test]
    fn three_flip_midpoint_is_ambiguous() {
        let pc = desk();
        let t = pc.build_lookup_table().unwrap();
        // a point 3 flips from each of two keys at distance 6 is a tie unless
        // a third key is closer
        let mut found = false;
        'outer: for i in 0..t.len() {
            for m in t.bk_index().query(t.entry(i).0, 6).matches {
                if m.1 != 6 {
                    continue;
                }
                let a = t.entry(i).0;
                let b = t.entry(m.0).0;
                let diff: Vec<usize> = a.xor(b).support();
                let mut mid = a.clone();
                for &p in &diff[..3] {
                    mid.flip(p);
                }
                match min_distance_decode(&t, &mid, 3).unwrap() {
                    Nearest::Ambiguous { distance, candidates } => {
                        assert_eq!(distance, 3);
                        assert!(candidates.len() >= 2);
                        found = true;
                        break 'outer;
                    }
                    _ => continue,
                }
            }
        }
        assert!(found);
        assert_eq!(default_radius(&t), 2);
    }

    #[test]
    fn localization_example() {
        let pc = ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap();
        // logical 4: X2, logical 9: X1 X6, logical 14: X2 X3 (1-based)
        let mut e = pc.zero_pattern();
        for (l, q) in [(4, 2), (9, 1), (9, 6), (14, 2), (14, 3)] {
            e.matrix.set(q - 1, l - 1, true);
        }
        assert!(pc.in_class_d(&e));
        let xi = pc.extract_syndrome(&e).unwrap();
        let loc = localize_rows(&pc, &xi).unwrap();
        assert_eq!(loc.per_row_supports, vec![vec![], vec![3, 13], vec![8, 13]]);
        assert_eq!(loc.logical_indices, vec![3, 8, 13]);
        assert_eq!(loc.confidence, Confidence::Exact);
        let zero = pc.extract_syndrome(&pc.zero_pattern()).unwrap();
        assert!(localize_rows(&pc, &zero).unwrap().logical_indices.is_empty());
    }

    #[test]
    fn localization_standard_array_path() {
        let pc = ProductCode::new(hamming(3).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap();
        for l in 0..7 {
            for q in 0..7 {
                let mut e = pc.zero_pattern();
                e.matrix.set(q, l, true);
                let loc = localize_rows(&pc, &pc.extract_syndrome(&e).unwrap()).unwrap();
                assert_eq!(loc.logical_indices, vec![l]);
            }
        }
    }

    #[test]
    fn bm_localization_with_flips() {
        let pc = ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Systematic, ErrorType::X).unwrap();
        let loc = Localizer::bm(&pc).unwrap();
        // logical qubits 1 and 4 carry X1 and X3
        let mut e = pc.zero_pattern();
        e.matrix.set(0, 0, true);
        e.matrix.set(2, 3, true);
        let xi = pc.extract_syndrome(&e).unwrap();
        for flips in Combinations::new(pc.r(), 1) {
            let mut noisy = xi.clone();
            for i in 0..pc.m() {
                noisy.matrix.flip(i, flips[0]);
            }
            let res = loc.localize(&noisy).unwrap();
            assert_eq!(res.logical_indices, vec![0, 3]);
            assert_eq!(res.confidence, Confidence::Nearest);
        }
        // three logical qubits plus a flip exceeds t_C = 3 on a row that sees all three
        let mut e3 = pc.zero_pattern();
        for l in [0, 1, 2] {
            e3.matrix.set(3, l, true);
        }
        let mut noisy = pc.extract_syndrome(&e3).unwrap();
        noisy.matrix.flip(0, 0);
        match loc.localize(&noisy) {
            Err(Error::RowDecode { row: 0 }) => {}
            Ok(r) => assert_ne!(r.logical_indices, vec![0, 1, 2]),
            Err(other) => panic!("{other}"),
        }
        let plain = ProductCode::new(bch(4, 3).unwrap(), steane(), Mode::Plain, ErrorType::X).unwrap();
        assert!(Localizer::bm(&plain).is_err());
    }
}
