//! Planted instances under the fixed-mutation model, FASTA output and the
//! ground-truth sidecar.
//!
//! Generation uses ChaCha8 seeded from a `u64`, so a seed produces the same
//! bytes on every platform.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{validate_instance, Alphabet, Instance, Lmer, Sequence};

pub const FASTA_LINE_WIDTH: usize = 70;

/// One planted occurrence. `sequence` and `start` are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plant {
    pub sequence: usize,
    pub start: usize,
    pub instance: Lmer,
}

#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub instance: Instance,
    pub motif: Lmer,
    pub plants: Vec<Plant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FmParams {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub d: usize,
    pub q: usize,
    /// Plant into q randomly chosen sequences instead of the first q.
    pub random_targets: bool,
}

pub fn generate_fm(
    n: usize,
    m: usize,
    l: usize,
    d: usize,
    q: usize,
    alphabet: Alphabet,
    seed: u64,
) -> Result<PlantedInstance> {
    generate_fm_with(
        FmParams {
            n,
            m,
            l,
            d,
            q,
            random_targets: false,
        },
        alphabet,
        seed,
    )
}

pub fn generate_fm_with(p: FmParams, alphabet: Alphabet, seed: u64) -> Result<PlantedInstance> {
    let FmParams {
        n,
        m,
        l,
        d,
        q,
        random_targets,
    } = p;
    if n < 2 || m == 0 || l == 0 || l > m || d > l || q == 0 || q > n {
        return Err(Error::BadParams(format!(
            "invalid parameters n={n} m={m} l={l} d={d} q={q}"
        )));
    }
    let sigma = alphabet.size();
    if d > 0 && sigma < 2 {
        return Err(Error::BadParams(
            "mutations need at least two symbols".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut codes: Vec<Vec<u8>> = (0..n)
        .map(|_| (0..m).map(|_| rng.gen_range(0..sigma) as u8).collect())
        .collect();
    let motif: Vec<u8> = (0..l).map(|_| rng.gen_range(0..sigma) as u8).collect();

    let mut targets: Vec<usize> = if random_targets {
        sample(&mut rng, n, q).into_vec()
    } else {
        (0..q).collect()
    };
    targets.sort_unstable();

    let mut plants = Vec::with_capacity(q);
    for &i in &targets {
        let mut inst = motif.clone();
        for pos in sample(&mut rng, l, d).into_iter() {
            // uniform over the σ − 1 other symbols
            let r = rng.gen_range(0..sigma - 1) as u8;
            inst[pos] = if r >= motif[pos] { r + 1 } else { r };
        }
        let start = rng.gen_range(0..=m - l);
        codes[i][start..start + l].copy_from_slice(&inst);
        plants.push(Plant {
            sequence: i,
            start,
            instance: Lmer::new(inst),
        });
    }

    let sequences = codes
        .into_iter()
        .enumerate()
        .map(|(i, c)| Sequence::new(Some(format!("seq{i}")), c))
        .collect::<Result<Vec<_>>>()?;
    let instance = validate_instance(alphabet, sequences, l, d, q)?;
    Ok(PlantedInstance {
        instance,
        motif: Lmer::new(motif),
        plants,
    })
}

/// FASTA with 70-column lines. Sequences without an id are named `seq<i>`.
pub fn write_fasta(seqs: &[Sequence], alphabet: &Alphabet) -> Vec<u8> {
    let mut out = Vec::new();
    for (i, s) in seqs.iter().enumerate() {
        out.push(b'>');
        match &s.id {
            Some(id) => out.extend_from_slice(id.as_bytes()),
            None => out.extend_from_slice(format!("seq{i}").as_bytes()),
        }
        out.push(b'\n');
        for line in s.codes().chunks(FASTA_LINE_WIDTH) {
            out.extend(line.iter().map(|&c| alphabet.symbol(c) as u8));
            out.push(b'\n');
        }
    }
    out
}

/// Ground truth as parsed back from a sidecar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub motif: Lmer,
    pub l: usize,
    pub d: usize,
    pub q: usize,
    pub plants: Vec<Plant>,
}

impl PlantedInstance {
    pub fn truth(&self) -> GroundTruth {
        GroundTruth {
            motif: self.motif.clone(),
            l: self.instance.l(),
            d: self.instance.d(),
            q: self.instance.q(),
            plants: self.plants.clone(),
        }
    }
}

/// `#motif <s> l=<l> d=<d> q=<q>` followed by `seq=<i> pos=<p> inst=<s>`
/// per plant, with 1-based sequence numbers and positions.
pub fn write_ground_truth(p: &PlantedInstance) -> Vec<u8> {
    render_truth(&p.truth(), p.instance.alphabet())
}

pub fn render_truth(t: &GroundTruth, alphabet: &Alphabet) -> Vec<u8> {
    let mut out = format!(
        "#motif {} l={} d={} q={}\n",
        t.motif.to_string(alphabet),
        t.l,
        t.d,
        t.q
    );
    for p in &t.plants {
        out.push_str(&format!(
            "seq={} pos={} inst={}\n",
            p.sequence + 1,
            p.start + 1,
            p.instance.to_string(alphabet)
        ));
    }
    out.into_bytes()
}

pub fn parse_ground_truth(bytes: &[u8], alphabet: &Alphabet) -> Result<GroundTruth> {
    let bad = |line: usize, reason: &str| Error::MalformedTruth {
        line,
        reason: reason.to_string(),
    };
    let text = std::str::from_utf8(bytes).map_err(|_| bad(1, "not valid UTF-8"))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, s)| !s.trim().is_empty());

    let (_, header) = lines
        .next()
        .ok_or_else(|| bad(1, "missing #motif header"))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("#motif") {
        return Err(bad(1, "first line must start with #motif"));
    }
    let motif_text = fields.next().ok_or_else(|| bad(1, "missing motif"))?;
    let motif = Lmer::parse(motif_text, alphabet)?;
    let mut params = [None; 3];
    for f in fields {
        let (key, value) = f
            .split_once('=')
            .ok_or_else(|| bad(1, "expected key=value"))?;
        let value: usize = value
            .parse()
            .map_err(|_| bad(1, "parameter is not a number"))?;
        let slot = match key {
            "l" => 0,
            "d" => 1,
            "q" => 2,
            _ => return Err(bad(1, "unknown parameter")),
        };
        params[slot] = Some(value);
    }
    let [Some(l), Some(d), Some(q)] = params else {
        return Err(bad(1, "header needs l=, d= and q="));
    };
    if motif.len() != l {
        return Err(bad(1, "motif length differs from l"));
    }

    let mut plants = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let (mut seq, mut pos, mut inst) = (None, None, None);
        for f in line.split_whitespace() {
            let (key, value) = f
                .split_once('=')
                .ok_or_else(|| bad(lineno, "expected key=value"))?;
            match key {
                "seq" => seq = value.parse::<usize>().ok().filter(|&v| v >= 1),
                "pos" => pos = value.parse::<usize>().ok().filter(|&v| v >= 1),
                "inst" => inst = Some(Lmer::parse(value, alphabet)?),
                _ => return Err(bad(lineno, "unknown field")),
            }
        }
        let (Some(seq), Some(pos), Some(inst)) = (seq, pos, inst) else {
            return Err(bad(
                lineno,
                "plant needs seq=, pos= (both 1-based) and inst=",
            ));
        };
        if inst.len() != l {
            return Err(bad(lineno, "planted l-mer length differs from l"));
        }
        plants.push(Plant {
            sequence: seq - 1,
            start: pos - 1,
            instance: inst,
        });
    }
    Ok(GroundTruth {
        motif,
        l,
        d,
        q,
        plants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitpack::mismatches;
    use crate::model::parse_fasta;
    use crate::solvers::verify_motif;

    #[test]
    fn plants_sit_at_exact_distance() {
        let p = generate_fm(20, 600, 13, 4, 20, Alphabet::dna(), 7).unwrap();
        assert_eq!(p.instance.n(), 20);
        assert_eq!(p.instance.m(), 600);
        assert_eq!(p.plants.len(), 20);
        for plant in &p.plants {
            assert_eq!(mismatches(plant.instance.codes(), p.motif.codes()), 4);
            let seq = p.instance.sequence(plant.sequence);
            assert_eq!(seq.window(plant.start, 13), plant.instance.codes());
        }
        let (ok, support) = verify_motif(&p.instance, &p.motif).unwrap();
        assert!(ok && support >= 20);
    }

    #[test]
    fn first_q_are_planted_by_default() {
        let p = generate_fm(8, 50, 6, 1, 5, Alphabet::dna(), 1).unwrap();
        let seqs: Vec<usize> = p.plants.iter().map(|x| x.sequence).collect();
        assert_eq!(seqs, vec![0, 1, 2, 3, 4]);
        let params = FmParams {
            n: 8,
            m: 50,
            l: 6,
            d: 1,
            q: 5,
            random_targets: true,
        };
        let r = generate_fm_with(params, Alphabet::dna(), 1).unwrap();
        assert_eq!(r.plants.len(), 5);
        assert!(r.plants.windows(2).all(|w| w[0].sequence < w[1].sequence));
    }

    #[test]
    fn zero_mutations_plant_verbatim() {
        let p = generate_fm(5, 40, 8, 0, 5, Alphabet::dna(), 3).unwrap();
        assert!(p.plants.iter().all(|x| x.instance == p.motif));
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate_fm(6, 200, 9, 2, 4, Alphabet::protein(), 42).unwrap();
        let b = generate_fm(6, 200, 9, 2, 4, Alphabet::protein(), 42).unwrap();
        let c = generate_fm(6, 200, 9, 2, 4, Alphabet::protein(), 43).unwrap();
        let fa = write_fasta(a.instance.sequences(), a.instance.alphabet());
        assert_eq!(
            fa,
            write_fasta(b.instance.sequences(), b.instance.alphabet())
        );
        assert_eq!(write_ground_truth(&a), write_ground_truth(&b));
        assert_ne!(
            fa,
            write_fasta(c.instance.sequences(), c.instance.alphabet())
        );
    }

    #[test]
    fn fasta_shape() {
        let dna = Alphabet::dna();
        assert!(write_fasta(&[], &dna).is_empty());
        let s = Sequence::new(None, dna.encode("ACGT").unwrap()).unwrap();
        assert_eq!(write_fasta(&[s], &dna), b">seq0\nACGT\n");
        let long = Sequence::new(Some("x".into()), vec![1; 141]).unwrap();
        let text = String::from_utf8(write_fasta(std::slice::from_ref(&long), &dna)).unwrap();
        let lens: Vec<usize> = text.lines().map(str::len).collect();
        assert_eq!(lens, vec![2, 70, 70, 1]);
        assert_eq!(parse_fasta(text.as_bytes(), &dna).unwrap(), vec![long]);
    }

    #[test]
    fn truth_round_trip() {
        let p = generate_fm(7, 60, 7, 2, 6, Alphabet::dna(), 9).unwrap();
        let bytes = write_ground_truth(&p);
        let text = std::str::from_utf8(&bytes).unwrap();
        assert!(text.starts_with(&format!(
            "#motif {} l=7 d=2 q=6\nseq=1 pos=",
            p.motif.to_string(&Alphabet::dna())
        )));
        assert_eq!(
            parse_ground_truth(&bytes, &Alphabet::dna()).unwrap(),
            p.truth()
        );
    }

    #[test]
    fn malformed_truth() {
        let dna = Alphabet::dna();
        assert!(parse_ground_truth(b"", &dna).is_err());
        assert!(parse_ground_truth(b"motif ACG l=3 d=0 q=1\n", &dna).is_err());
        assert!(parse_ground_truth(b"#motif ACG l=3 d=0\n", &dna).is_err());
        assert!(
            parse_ground_truth(b"#motif ACG l=3 d=0 q=1\nseq=0 pos=1 inst=ACG\n", &dna).is_err()
        );
        assert!(
            parse_ground_truth(b"#motif ACG l=3 d=0 q=1\nseq=1 pos=1 inst=AC\n", &dna).is_err()
        );
    }

    #[test]
    fn bad_params() {
        assert!(generate_fm(1, 10, 3, 1, 1, Alphabet::dna(), 0).is_err());
        assert!(generate_fm(4, 10, 11, 1, 1, Alphabet::dna(), 0).is_err());
        assert!(generate_fm(4, 10, 3, 4, 1, Alphabet::dna(), 0).is_err());
        assert!(generate_fm(4, 10, 3, 1, 5, Alphabet::dna(), 0).is_err());
    }
}
