//! Named example systems. Axes are the predictors `X1..Xn` followed by the
//! target `S`, which is always the last axis.

use pidkit_core::{Error, JointDistribution, Result};

/// Registered names; `predpred` takes a parameter, written `predpred(c)`.
pub const NAMES: [&str; 24] = [
    "rdn",
    "unq",
    "xor",
    "and",
    "or",
    "sum",
    "rdnxor",
    "rdnunqxor",
    "reducedor",
    "wb-a",
    "wb-b",
    "wb-c",
    "uniquemis",
    "dblxor",
    "xorcopy",
    "xorunq",
    "giantbit",
    "parity3",
    "anddup",
    "parityrdnrdn",
    "xorduplicate",
    "xorloses",
    "xormulticoal",
    "predpred",
];

/// Valid range of the predictor-predictor parameter of `predpred`.
pub const PREDPRED_RANGE: (f64, f64) = (-0.8, 0.1);

pub fn describe(name: &str) -> &'static str {
    match name {
        "rdn" => "S = X1 = X2, one shared bit",
        "unq" => "S = (X1, X2), two independent bits copied",
        "xor" => "S = X1 xor X2",
        "and" => "S = X1 and X2",
        "or" => "S = X1 or X2",
        "sum" => "S = X1 + X2",
        "rdnxor" => "a shared bit plus an xor bit",
        "rdnunqxor" => "one redundant, two unique and one xor bit",
        "reducedor" => "or without the (1,1) input",
        "wb-a" => "three equiprobable outcomes, S ternary",
        "wb-b" => "four equiprobable outcomes, S ternary",
        "wb-c" => "six equiprobable outcomes, S ternary",
        "uniquemis" => "X1 determines S; X2 carries local misinformation",
        "dblxor" => "S = (X1 xor X2, X2 xor X3)",
        "xorcopy" => "X3 = X1 xor X2, S = (X1, X2, X3)",
        "xorunq" => "S = (X1 xor X2, X3)",
        "giantbit" => "S = X1 = X2 = X3",
        "parity3" => "S = X1 xor X2 xor X3",
        "anddup" => "S = X1 and X2, X3 = X1",
        "parityrdnrdn" => "two bits shared by all predictors plus a three-way parity bit",
        "xorduplicate" => "S = X1 xor X2, X3 = X1",
        "xorloses" => "S = X1 xor X2, X3 = X1 xor X2",
        "xormulticoal" => "Xi hold pairs of three bits, S is their parity",
        "predpred" => "binary system with predictor-predictor coupling c in [-0.8, 0.1]",
        _ => "",
    }
}

/// Builds a registered system. `predpred` alone means `predpred(0)`.
pub fn build(name: &str) -> Result<JointDistribution> {
    let name = name.trim();
    if let Some(arg) = name.strip_prefix("predpred(").and_then(|r| r.strip_suffix(')')) {
        let c: f64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidOption(format!("predpred parameter {arg:?} is not a number")))?;
        return predpred(c);
    }
    match name {
        "rdn" => equiprobable(&[2, 2, 2], &[&[0, 0, 0], &[1, 1, 1]]),
        "unq" => from_bits(2, &[2, 2, 4], |b| vec![b[0], b[1], 2 * b[0] + b[1]]),
        "xor" => from_bits(2, &[2, 2, 2], |b| vec![b[0], b[1], b[0] ^ b[1]]),
        "and" => from_bits(2, &[2, 2, 2], |b| vec![b[0], b[1], b[0] & b[1]]),
        "or" => from_bits(2, &[2, 2, 2], |b| vec![b[0], b[1], b[0] | b[1]]),
        "sum" => from_bits(2, &[2, 2, 3], |b| vec![b[0], b[1], b[0] + b[1]]),
        "rdnxor" => from_bits(3, &[4, 4, 4], |b| {
            let (r, x, y) = (b[0], b[1], b[2]);
            vec![2 * r + x, 2 * r + y, 2 * r + (x ^ y)]
        }),
        "rdnunqxor" => from_bits(5, &[8, 8, 16], |b| {
            let (r, u1, u2, x, y) = (b[0], b[1], b[2], b[3], b[4]);
            vec![4 * r + 2 * u1 + x, 4 * r + 2 * u2 + y, 8 * r + 4 * u1 + 2 * u2 + (x ^ y)]
        }),
        "reducedor" => rows(&[2, 2, 2], &[(&[0, 0, 0], 0.5), (&[0, 1, 1], 0.25), (&[1, 0, 1], 0.25)]),
        "wb-a" => equiprobable(&[2, 2, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 2]]),
        "wb-b" => equiprobable(&[2, 2, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 1, 1], &[1, 0, 2]]),
        "wb-c" => equiprobable(
            &[2, 2, 3],
            &[&[0, 0, 0], &[0, 0, 1], &[0, 1, 2], &[1, 0, 0], &[1, 0, 2], &[1, 1, 1]],
        ),
        "uniquemis" => rows(&[2, 2, 2], &[(&[0, 0, 0], 0.4), (&[0, 1, 0], 0.1), (&[1, 1, 1], 0.5)]),
        "dblxor" => from_bits(3, &[2, 2, 2, 4], |b| {
            vec![b[0], b[1], b[2], 2 * (b[0] ^ b[1]) + (b[1] ^ b[2])]
        }),
        "xorcopy" => from_bits(2, &[2, 2, 2, 8], |b| {
            let x3 = b[0] ^ b[1];
            vec![b[0], b[1], x3, 4 * b[0] + 2 * b[1] + x3]
        }),
        "xorunq" => from_bits(3, &[2, 2, 2, 4], |b| vec![b[0], b[1], b[2], 2 * (b[0] ^ b[1]) + b[2]]),
        "giantbit" => equiprobable(&[2, 2, 2, 2], &[&[0, 0, 0, 0], &[1, 1, 1, 1]]),
        "parity3" => from_bits(3, &[2, 2, 2, 2], |b| vec![b[0], b[1], b[2], b[0] ^ b[1] ^ b[2]]),
        "anddup" => from_bits(2, &[2, 2, 2, 2], |b| vec![b[0], b[1], b[0], b[0] & b[1]]),
        "parityrdnrdn" => from_bits(5, &[8, 8, 8, 8], |b| {
            let (r, q, a1, a2, a3) = (b[0], b[1], b[2], b[3], b[4]);
            let shared = 4 * r + 2 * q;
            vec![shared + a1, shared + a2, shared + a3, shared + (a1 ^ a2 ^ a3)]
        }),
        "xorduplicate" => from_bits(2, &[2, 2, 2, 2], |b| vec![b[0], b[1], b[0], b[0] ^ b[1]]),
        "xorloses" => from_bits(2, &[2, 2, 2, 2], |b| vec![b[0], b[1], b[0] ^ b[1], b[0] ^ b[1]]),
        "xormulticoal" => from_bits(3, &[4, 4, 4, 2], |b| {
            let (x, y, z) = (b[0], b[1], b[2]);
            vec![2 * x + y, 2 * x + z, 2 * y + z, x ^ y ^ z]
        }),
        "predpred" => predpred(0.0),
        _ => Err(Error::InvalidOption(format!("unknown example {name:?}"))),
    }
}

/// The predictor-coupling family, valid for `-0.8 <= c <= 0.1`.
pub fn predpred(c: f64) -> Result<JointDistribution> {
    let (lo, hi) = PREDPRED_RANGE;
    if !(lo - 1e-12..=hi + 1e-12).contains(&c) {
        return Err(Error::InvalidOption(format!("predpred needs {lo} <= c <= {hi}, got {c}")));
    }
    // written as p(x1, x2, s)
    let cells: [(&[usize], f64); 8] = [
        (&[0, 0, 0], c / 4.0 + 0.25),
        (&[0, 1, 0], 1.0 / 40.0 - c / 4.0),
        (&[1, 0, 0], 1.0 / 40.0 - c / 4.0),
        (&[1, 1, 0], c / 4.0 + 0.2),
        (&[0, 0, 1], 0.0),
        (&[0, 1, 1], 9.0 / 40.0),
        (&[1, 0, 1], 9.0 / 40.0),
        (&[1, 1, 1], 1.0 / 20.0),
    ];
    let clamped: Vec<(&[usize], f64)> = cells.iter().map(|&(o, p)| (o, p.max(0.0))).collect();
    JointDistribution::from_outcomes(vec![2, 2, 2], Some(2), clamped)
}

/// The joint-MI minimiser for `reducedor` with the predictors coupled.
pub fn reducedor_coupled() -> JointDistribution {
    rows(&[2, 2, 2], &[(&[0, 0, 0], 0.5), (&[0, 0, 1], 0.25), (&[1, 1, 1], 0.25)]).expect("valid table")
}

fn target_last(cards: &[usize]) -> Option<usize> {
    Some(cards.len() - 1)
}

fn equiprobable(cards: &[usize], outcomes: &[&[usize]]) -> Result<JointDistribution> {
    JointDistribution::equiprobable(cards.to_vec(), target_last(cards), outcomes)
}

fn rows(cards: &[usize], rows: &[(&[usize], f64)]) -> Result<JointDistribution> {
    JointDistribution::from_outcomes(cards.to_vec(), target_last(cards), rows.iter().copied())
}

/// Equiprobable system over `bits` independent fair bits; `f` maps the bits
/// to a full outcome.
fn from_bits(bits: usize, cards: &[usize], f: impl Fn(&[usize]) -> Vec<usize>) -> Result<JointDistribution> {
    let outcomes: Vec<Vec<usize>> = (0..1usize << bits)
        .map(|m| {
            let b: Vec<usize> = (0..bits).map(|i| (m >> (bits - 1 - i)) & 1).collect();
            f(&b)
        })
        .collect();
    let size: usize = cards.iter().product();
    let mut probs = vec![0.0; size];
    let w = 1.0 / outcomes.len() as f64;
    for o in &outcomes {
        let idx = o.iter().zip(cards).try_fold(0usize, |acc, (&v, &c)| {
            (v < c).then_some(acc * c + v).ok_or(Error::InvalidOutcome)
        })?;
        probs[idx] += w;
    }
    JointDistribution::new(cards.to_vec(), probs, target_last(cards))
}
