//! Alphabets, encoded sequences, problem instances and FASTA input.
//!
//! Symbols are stored as small integer codes `0..σ`. Codes follow the order
//! in which the alphabet lists its symbols, so sorting by code sorts
//! lexicographically for the built-in DNA and protein alphabets.

use std::fmt;

use crate::error::{Error, Result};

const NO_CODE: u8 = u8::MAX;

pub const DNA_SYMBOLS: &str = "ACGT";
pub const PROTEIN_SYMBOLS: &str = "ACDEFGHIKLMNPQRSTVWY";

#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    lookup: [u8; 256],
}

impl Alphabet {
    /// Builds an alphabet from ASCII symbols. Lowercase input is folded to
    /// uppercase when the alphabet itself has no lowercase symbols.
    pub fn new(symbols: &str) -> Result<Self> {
        let bytes = symbols.as_bytes();
        if bytes.len() < 2 {
            return Err(Error::BadAlphabet("need at least two symbols".into()));
        }
        if bytes.len() > 64 {
            return Err(Error::BadAlphabet(
                "at most 64 symbols are supported".into(),
            ));
        }
        let mut lookup = [NO_CODE; 256];
        for (code, &b) in bytes.iter().enumerate() {
            if !b.is_ascii_graphic() || b == b'>' {
                return Err(Error::BadAlphabet(format!(
                    "symbol {:?} is not allowed",
                    b as char
                )));
            }
            if lookup[b as usize] != NO_CODE {
                return Err(Error::BadAlphabet(format!(
                    "duplicate symbol {:?}",
                    b as char
                )));
            }
            lookup[b as usize] = code as u8;
        }
        if !bytes.iter().any(u8::is_ascii_lowercase) {
            for &b in bytes {
                if b.is_ascii_uppercase() {
                    lookup[b.to_ascii_lowercase() as usize] = lookup[b as usize];
                }
            }
        }
        Ok(Alphabet {
            symbols: bytes.to_vec(),
            lookup,
        })
    }

    pub fn dna() -> Self {
        Alphabet::new(DNA_SYMBOLS).expect("valid DNA alphabet")
    }

    pub fn protein() -> Self {
        Alphabet::new(PROTEIN_SYMBOLS).expect("valid protein alphabet")
    }

    /// σ = |Σ|.
    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    /// ⌈log₂ σ⌉, the number of bit planes a packed l-mer needs.
    pub fn bits_per_symbol(&self) -> usize {
        let s = self.size();
        (usize::BITS - (s - 1).leading_zeros()) as usize
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn code(&self, symbol: u8) -> Option<u8> {
        match self.lookup[symbol as usize] {
            NO_CODE => None,
            c => Some(c),
        }
    }

    pub fn symbol(&self, code: u8) -> char {
        self.symbols[code as usize] as char
    }

    pub fn decode(&self, codes: &[u8]) -> String {
        codes.iter().map(|&c| self.symbol(c)).collect()
    }

    /// Encodes a bare string (no FASTA framing) to codes.
    pub fn encode(&self, text: &str) -> Result<Vec<u8>> {
        text.char_indices()
            .map(|(i, ch)| {
                if ch.is_ascii() {
                    if let Some(c) = self.code(ch as u8) {
                        return Ok(c);
                    }
                }
                Err(Error::UnknownSymbol {
                    position: i,
                    symbol: ch,
                })
            })
            .collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({})", String::from_utf8_lossy(&self.symbols))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub id: Option<String>,
    codes: Vec<u8>,
}

impl Sequence {
    pub fn new(id: Option<String>, codes: Vec<u8>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Sequence { id, codes })
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// The l-mer starting at 0-based `start`.
    pub fn window(&self, start: usize, l: usize) -> &[u8] {
        &self.codes[start..start + l]
    }

    /// Number of l-mer windows, m − l + 1 (zero when l > m).
    pub fn window_count(&self, l: usize) -> usize {
        (self.codes.len() + 1).saturating_sub(l)
    }
}

pub fn encode_sequence(text: &str, alphabet: &Alphabet) -> Result<Sequence> {
    Sequence::new(None, alphabet.encode(text)?)
}

/// A string of symbol codes. Ordering is lexicographic by code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lmer(Vec<u8>);

impl Lmer {
    pub fn new(codes: Vec<u8>) -> Self {
        Lmer(codes)
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        Ok(Lmer(alphabet.encode(text)?))
    }

    pub fn codes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_string(&self, alphabet: &Alphabet) -> String {
        alphabet.decode(&self.0)
    }

    pub fn into_codes(self) -> Vec<u8> {
        self.0
    }
}

impl From<&[u8]> for Lmer {
    fn from(codes: &[u8]) -> Self {
        Lmer(codes.to_vec())
    }
}

/// A validated (l, d, q) search over n equal-length sequences.
#[derive(Debug, Clone)]
pub struct Instance {
    alphabet: Alphabet,
    sequences: Vec<Sequence>,
    l: usize,
    d: usize,
    q: usize,
}

impl Instance {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn sequence(&self, i: usize) -> &Sequence {
        &self.sequences[i]
    }

    pub fn n(&self) -> usize {
        self.sequences.len()
    }

    pub fn m(&self) -> usize {
        self.sequences[0].len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.size()
    }

    /// m − l + 1.
    pub fn windows(&self) -> usize {
        self.m() - self.l + 1
    }

    /// Same sequences with different (l, d, q).
    pub fn with_params(&self, l: usize, d: usize, q: usize) -> Result<Instance> {
        validate_instance(self.alphabet.clone(), self.sequences.clone(), l, d, q)
    }
}

pub fn validate_instance(
    alphabet: Alphabet,
    sequences: Vec<Sequence>,
    l: usize,
    d: usize,
    q: usize,
) -> Result<Instance> {
    let n = sequences.len();
    if n < 2 {
        return Err(Error::BadParams(format!(
            "need at least 2 sequences, got {n}"
        )));
    }
    let m = sequences[0].len();
    if let Some((i, s)) = sequences.iter().enumerate().find(|(_, s)| s.len() != m) {
        return Err(Error::BadParams(format!(
            "unequal sequence lengths: sequence 1 has {m}, sequence {} has {}",
            i + 1,
            s.len()
        )));
    }
    if m == 0 {
        return Err(Error::EmptySequence);
    }
    let sigma = alphabet.size() as u8;
    if sequences
        .iter()
        .any(|s| s.codes().iter().any(|&c| c >= sigma))
    {
        return Err(Error::BadParams(
            "sequence code outside the alphabet".into(),
        ));
    }
    if l < 1 {
        return Err(Error::BadParams("l must be at least 1".into()));
    }
    if l > m {
        return Err(Error::BadParams(format!(
            "l = {l} exceeds sequence length m = {m}"
        )));
    }
    if d > l {
        return Err(Error::BadParams(format!("d = {d} exceeds l = {l}")));
    }
    if q < 1 {
        return Err(Error::BadParams("q must be at least 1".into()));
    }
    if q > n {
        return Err(Error::BadParams(format!("q = {q} exceeds n = {n}")));
    }
    Ok(Instance {
        alphabet,
        sequences,
        l,
        d,
        q,
    })
}

/// Deduplicated motifs in code order, each with its support (the number of
/// sequences holding an occurrence within distance d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifSet {
    pub l: usize,
    pub d: usize,
    pub q: usize,
    motifs: Vec<(Lmer, usize)>,
}

impl MotifSet {
    pub fn new(l: usize, d: usize, q: usize, mut motifs: Vec<(Lmer, usize)>) -> Self {
        motifs.sort_unstable();
        motifs.dedup_by(|a, b| a.0 == b.0);
        MotifSet { l, d, q, motifs }
    }

    pub fn motifs(&self) -> &[(Lmer, usize)] {
        &self.motifs
    }

    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    pub fn contains(&self, motif: &Lmer) -> bool {
        self.motifs.binary_search_by(|(m, _)| m.cmp(motif)).is_ok()
    }

    pub fn support(&self, motif: &Lmer) -> Option<usize> {
        self.motifs
            .binary_search_by(|(m, _)| m.cmp(motif))
            .ok()
            .map(|i| self.motifs[i].1)
    }

    /// `MOTIF<TAB>support` lines, one per motif.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let mut out = String::with_capacity(self.motifs.len() * (self.l + 4));
        for (m, support) in &self.motifs {
            out.push_str(&m.to_string(alphabet));
            out.push('\t');
            out.push_str(&support.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses FASTA text. Blank lines are ignored; sequence lines of a record
/// are concatenated.
pub fn parse_fasta(bytes: &[u8], alphabet: &Alphabet) -> Result<Vec<Sequence>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::MalformedFasta {
        line: 1 + bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count(),
        reason: "not valid UTF-8".into(),
    })?;
    let mut out = Vec::new();
    let mut current: Option<(String, Vec<u8>)> = None;
    let mut offset_in_record = 0usize;

    let finish = |rec: Option<(String, Vec<u8>)>, out: &mut Vec<Sequence>| -> Result<()> {
        if let Some((id, codes)) = rec {
            out.push(Sequence::new(Some(id), codes)?);
        }
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            finish(current.take(), &mut out)?;
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some((id, Vec::new()));
            offset_in_record = 0;
            continue;
        }
        let Some((_, codes)) = current.as_mut() else {
            return Err(Error::MalformedFasta {
                line: lineno + 1,
                reason: "sequence data before the first '>' header".into(),
            });
        };
        for ch in line.chars() {
            let code = if ch.is_ascii() {
                alphabet.code(ch as u8)
            } else {
                None
            };
            match code {
                Some(c) => codes.push(c),
                None => {
                    return Err(Error::UnknownSymbol {
                        position: offset_in_record,
                        symbol: ch,
                    });
                }
            }
            offset_in_record += 1;
        }
    }
    finish(current, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dna_codes_are_alphabetical() {
        let s = encode_sequence("ACGT", &Alphabet::dna()).unwrap();
        assert_eq!(s.codes(), &[0, 1, 2, 3]);
        let lower = encode_sequence("acgt", &Alphabet::dna()).unwrap();
        assert_eq!(lower.codes(), s.codes());
    }

    #[test]
    fn encode_rejects_empty_and_unknown() {
        let dna = Alphabet::dna();
        assert_eq!(encode_sequence("", &dna), Err(Error::EmptySequence));
        assert_eq!(
            encode_sequence("ACGX", &dna),
            Err(Error::UnknownSymbol {
                position: 3,
                symbol: 'X'
            })
        );
        assert!(matches!(
            encode_sequence("ACGN", &dna),
            Err(Error::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn alphabet_sizes() {
        assert_eq!(Alphabet::dna().bits_per_symbol(), 2);
        assert_eq!(Alphabet::protein().size(), 20);
        assert_eq!(Alphabet::protein().bits_per_symbol(), 5);
        assert_eq!(Alphabet::new("01").unwrap().bits_per_symbol(), 1);
        assert_eq!(Alphabet::new("ABCDE").unwrap().bits_per_symbol(), 3);
        assert!(Alphabet::new("A").is_err());
        assert!(Alphabet::new("AA").is_err());
    }

    #[test]
    fn decode_round_trips_every_symbol() {
        for a in [
            Alphabet::dna(),
            Alphabet::protein(),
            Alphabet::new("01").unwrap(),
        ] {
            for code in 0..a.size() as u8 {
                let text = a.decode(&[code]);
                assert_eq!(a.encode(&text).unwrap(), vec![code]);
            }
        }
    }

    #[test]
    fn fasta_records() {
        let dna = Alphabet::dna();
        let seqs = parse_fasta(b">a\nACGT\n>b\nTTTT\n", &dna).unwrap();
        assert_eq!(seqs.len(), 2);
        assert!(seqs.iter().all(|s| s.len() == 4));
        assert_eq!(seqs[1].id.as_deref(), Some("b"));

        let multi = parse_fasta(b">a\nAC\nGT\n", &dna).unwrap();
        assert_eq!(multi.len(), 1);
        assert_eq!(dna.decode(multi[0].codes()), "ACGT");

        assert!(matches!(
            parse_fasta(b"ACGT\n", &dna),
            Err(Error::MalformedFasta { line: 1, .. })
        ));
        assert!(parse_fasta(b"\n\n", &dna).unwrap().is_empty());
        assert_eq!(
            parse_fasta(b">a\n>b\nAC\n", &dna),
            Err(Error::EmptySequence)
        );
        assert_eq!(
            parse_fasta(b">a\nAC\nGX\n", &dna),
            Err(Error::UnknownSymbol {
                position: 3,
                symbol: 'X'
            })
        );
    }

    fn seqs(n: usize, m: usize) -> Vec<Sequence> {
        (0..n)
            .map(|_| Sequence::new(None, vec![0; m]).unwrap())
            .collect()
    }

    #[test]
    fn benchmark_shape_is_valid() {
        let inst = validate_instance(Alphabet::dna(), seqs(20, 600), 13, 4, 20).unwrap();
        assert_eq!((inst.n(), inst.m(), inst.windows()), (20, 600, 588));
    }

    #[test]
    fn bad_params() {
        let dna = Alphabet::dna();
        let err = validate_instance(dna.clone(), seqs(5, 10), 3, 1, 6).unwrap_err();
        assert!(matches!(err, Error::BadParams(ref s) if s.contains("q = 6")));
        assert!(validate_instance(dna.clone(), seqs(5, 10), 0, 0, 2).is_err());
        assert!(validate_instance(dna.clone(), seqs(5, 10), 11, 0, 2).is_err());
        assert!(validate_instance(dna.clone(), seqs(5, 10), 3, 4, 2).is_err());
        assert!(validate_instance(dna.clone(), seqs(1, 10), 3, 1, 1).is_err());
        assert!(validate_instance(dna.clone(), seqs(5, 10), 3, 1, 0).is_err());
        let mut uneven = seqs(3, 10);
        uneven.push(Sequence::new(None, vec![0; 9]).unwrap());
        let err = validate_instance(dna, uneven, 3, 1, 2).unwrap_err();
        assert!(matches!(err, Error::BadParams(ref s) if s.contains("unequal")));
    }

    #[test]
    fn validation_accepts_exactly_the_invariant_grid() {
        let dna = Alphabet::dna();
        for n in 1..=4 {
            for m in 1..=5 {
                for l in 0..=6 {
                    for d in 0..=7 {
                        for q in 0..=5 {
                            let expected = n >= 2 && l >= 1 && l <= m && d <= l && q >= 1 && q <= n;
                            let got = validate_instance(dna.clone(), seqs(n, m), l, d, q).is_ok();
                            assert_eq!(got, expected, "n={n} m={m} l={l} d={d} q={q}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn motif_set_is_canonical() {
        let a = Lmer::new(vec![1, 0]);
        let b = Lmer::new(vec![0, 3]);
        let set = MotifSet::new(
            2,
            0,
            1,
            vec![(a.clone(), 2), (b.clone(), 1), (a.clone(), 2)],
        );
        assert_eq!(set.len(), 2);
        assert_eq!(set.motifs()[0].0, b);
        assert_eq!(set.support(&a), Some(2));
        assert_eq!(set.render(&Alphabet::dna()), "AT\t1\nCA\t2\n");
    }
}
