//! Example manifolds shipped as source text and parsed like user files.

use crate::cli::{parse_manifold, ManifoldFile};
use crate::error::{Error, Result};

pub const NAMES: [&str; 3] = ["torus3", "iwasawa", "s3xs3-calabi-eckmann"];

const TORUS3: &str = "\
# flat complex 3-torus
name torus3
dim 3
coframe phi1 phi2 phi3
d phi1 = 0
d phi2 = 0
d phi3 = 0
metric 1 1 = 1/2
metric 2 2 = 1/2
metric 3 3 = 1/2
volume = 1*(123|)
";

const IWASAWA: &str = "\
# Iwasawa manifold: quotient of the complex Heisenberg group
name iwasawa
dim 3
coframe phi1 phi2 phi3
d phi1 = 0
d phi2 = 0
d phi3 = -1*(12|)
metric 1 1 = 1/2
metric 2 2 = 1/2
metric 3 3 = 1/2
volume = 1*(123|)
";

const S3XS3: &str = "\
# Calabi-Eckmann structure on SU(2) x SU(2)
name s3xs3-calabi-eckmann
dim 3
real e1 e2 e3 f1 f2 f3
d e1 = -2*e2^e3
d e2 = 2*e1^e3
d e3 = -2*e1^e2
d f1 = -2*f2^f3
d f2 = 2*f1^f3
d f3 = -2*f1^f2
J e1 = e2
J f1 = f2
J e3 = f3
coframe phi1 phi2 phi3
metric 1 1 = 1/2
metric 2 2 = 1/2
metric 3 3 = 1/2
";

/// Source text of a builtin example.
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "torus3" => Some(TORUS3),
        "iwasawa" => Some(IWASAWA),
        "s3xs3-calabi-eckmann" | "s3xs3" => Some(S3XS3),
        _ => None,
    }
}

pub fn load(name: &str) -> Result<ManifoldFile> {
    let text = source(name).ok_or_else(|| Error::Usage(format!("unknown builtin `{name}`; known: {}", NAMES.join(", "))))?;
    parse_manifold(text)
}
