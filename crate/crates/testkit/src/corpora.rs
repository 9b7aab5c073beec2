//! Fixture corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Raw and expected values of the medical billing code task.
pub const MEDICAL: [(&str, &str); 4] = [
    ("CPT-00350", "[CPT-00350]"),
    ("[CPT-00340", "[CPT-00340]"),
    ("[CPT-11536]", "[CPT-11536]"),
    ("CPT115", "[CPT-115]"),
];

/// Raw and expected values of the employee name task.
pub const NAMES: [(&str, &str); 4] = [
    ("Dr. Eran Yahav", "Yahav, E."),
    ("Fisher, K.", "Fisher, K."),
    ("Bill Gates, Sr.", "Gates, B."),
    ("Oege de Moor", "Moor, O."),
];

/// The name program, hand-encoded. Every branch ends with the period the
/// expected output carries, and the particle "de" is lowercase.
pub const NAMES_PROGRAM_JSON: &str = r#"{
  "branches": [
    {"match": "<U><L>+'.'' '<U><L>+' '<U><L>+",
     "plan": [{"extract": [8, 9]}, {"const": ","}, {"const": " "}, {"extract": [5, 5]}, {"const": "."}]},
    {"match": "<U><L>+' '<U><L>+','' '<U><L>+'.'",
     "plan": [{"extract": [4, 5]}, {"const": ","}, {"const": " "}, {"extract": [1, 1]}, {"const": "."}]},
    {"match": "<U><L>+' '<L>+' '<U><L>+",
     "plan": [{"extract": [6, 7]}, {"const": ","}, {"const": " "}, {"extract": [1, 1]}, {"const": "."}]}
  ]
}"#;

/// Phone format cluster sizes in the order no-space parentheses, dashes,
/// target format, dots.
pub const PHONE_COUNTS: [usize; 4] = [2572, 3749, 1436, 631];

pub const PHONE_TARGET: &str = "'('<D>3')'' '<D>3'-'<D>4";

pub const PHONE_SCRIPT: [&str; 2] = [
    r"Replace '/^\(({digit}{3})\)({digit}{3})\-({digit}{4})$/' in column1 with '($1) $2-$3'",
    r"Replace '/^({digit}{3})\-({digit}{3})\-({digit}{4})$/' in column1 with '($1) $2-$3'",
];

/// `total` phone numbers in the four formats, in proportion to
/// [`PHONE_COUNTS`], shuffled with a fixed seed.
pub fn phone_corpus(total: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sum: usize = PHONE_COUNTS.iter().sum();
    let mut sizes: Vec<usize> = PHONE_COUNTS.iter().map(|c| c * total / sum).collect();
    let short = total - sizes.iter().sum::<usize>();
    sizes[1] += short;
    let mut rows = Vec::with_capacity(total);
    for (format, &size) in sizes.iter().enumerate() {
        for _ in 0..size {
            let a: u32 = rng.gen_range(200..1000);
            let b: u32 = rng.gen_range(200..1000);
            let c: u32 = rng.gen_range(0..10000);
            rows.push(match format {
                0 => format!("({a}){b}-{c:04}"),
                1 => format!("{a}-{b}-{c:04}"),
                2 => format!("({a}) {b}-{c:04}"),
                _ => format!("{a}.{b}.{c:04}"),
            });
        }
    }
    rows.shuffle(&mut rng);
    rows
}

/// Dates in day/month/year order plus a few already in the target layout.
pub fn date_corpus() -> Vec<String> {
    [
        "25/12/2017", "01/02/2018", "13/07/2016", "30/11/2019", "12-25-2017", "02-01-2018",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

pub const DATE_TARGET: &str = "<D>2'-'<D>2'-'<D>4";
