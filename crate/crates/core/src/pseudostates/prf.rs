//! Keys and the two one-bit pseudorandom function families.

use hmac::{Hmac, KeyInit, Mac};
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{out_of_range, Error, Result};

type HmacSha256 = Hmac<Sha256>;

/// A κ-bit key. Bit `i` is bit `7 - i % 8` of byte `i / 8`; padding bits in
/// the last byte are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Key {
    bytes: Vec<u8>,
    kappa: usize,
}

fn tail_mask(kappa: usize) -> u8 {
    match kappa % 8 {
        0 => 0xFF,
        r => 0xFFu8 << (8 - r),
    }
}

impl Key {
    pub fn new(bytes: Vec<u8>, kappa: usize) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidKey("key length must be at least one bit".into()));
        }
        if bytes.len() != kappa.div_ceil(8) {
            return Err(Error::InvalidKey(format!(
                "{} bytes cannot hold exactly {kappa} bits",
                bytes.len()
            )));
        }
        if bytes[bytes.len() - 1] & !tail_mask(kappa) != 0 {
            return Err(Error::InvalidKey("padding bits must be zero".into()));
        }
        Ok(Self { bytes, kappa })
    }

    /// Parses lowercase or uppercase hex; `kappa` defaults to four bits per digit.
    pub fn from_hex(s: &str, kappa: Option<usize>) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::InvalidKey(e.to_string()))?;
        let kappa = kappa.unwrap_or(bytes.len() * 8);
        Self::new(bytes, kappa)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    pub fn zero(kappa: usize) -> Result<Self> {
        Self::new(vec![0; kappa.div_ceil(8)], kappa)
    }

    /// Key whose bits are the κ-bit binary expansion of `index`, most
    /// significant first. Used for exhaustive key enumeration.
    pub fn from_index(index: u64, kappa: usize) -> Result<Self> {
        if kappa == 0 || kappa > 64 || (kappa < 64 && index >> kappa != 0) {
            return Err(out_of_range(
                "key index",
                format!("{index} does not fit in {kappa} bits"),
            ));
        }
        let mut bytes = vec![0u8; kappa.div_ceil(8)];
        for i in 0..kappa {
            if (index >> (kappa - 1 - i)) & 1 == 1 {
                bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        Self::new(bytes, kappa)
    }

    pub fn random<R: Rng + ?Sized>(kappa: usize, rng: &mut R) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidKey("key length must be at least one bit".into()));
        }
        let mut bytes = vec![0u8; kappa.div_ceil(8)];
        rng.fill(&mut bytes[..]);
        let last = bytes.len() - 1;
        bytes[last] &= tail_mask(kappa);
        Self::new(bytes, kappa)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit(&self, i: usize) -> bool {
        i < self.kappa && (self.bytes[i / 8] >> (7 - i % 8)) & 1 == 1
    }

    fn mac(&self) -> HmacSha256 {
        let mut mac = HmacSha256::new_from_slice(&self.bytes).expect("HMAC accepts any key length");
        mac.update(&(self.kappa as u32).to_be_bytes());
        mac
    }
}

/// Expands `(label, input)` under `master` into a fresh κ-bit key
/// (HMAC-SHA256 in counter mode).
pub fn derive_key(master: &Key, label: &[u8], input: &[u8], kappa: usize) -> Result<Key> {
    if kappa == 0 {
        return Err(Error::InvalidKey("key length must be at least one bit".into()));
    }
    let mut bytes = Vec::with_capacity(kappa.div_ceil(8) + 32);
    let mut counter = 0u32;
    while bytes.len() < kappa.div_ceil(8) {
        let mut mac = master.mac();
        mac.update(label);
        mac.update(&(input.len() as u32).to_be_bytes());
        mac.update(input);
        mac.update(&counter.to_be_bytes());
        bytes.extend_from_slice(&mac.finalize().into_bytes());
        counter += 1;
    }
    bytes.truncate(kappa.div_ceil(8));
    let last = bytes.len() - 1;
    bytes[last] &= tail_mask(kappa);
    Key::new(bytes, kappa)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrfKind {
    KeyedHash,
    Polynomial,
}

pub const DEFAULT_POLY_DEGREE: usize = 7;
pub const MAX_FIELD_BITS: usize = 16;
const MAX_HASH_DOMAIN_BITS: usize = 48;

/// Irreducible modulus for GF(2^w), indexed by w (low-weight polynomials).
const IRREDUCIBLE: [u32; MAX_FIELD_BITS + 1] = [
    0, 0b11, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrfSpec {
    pub kind: PrfKind,
    #[serde(default = "default_degree")]
    pub degree: usize,
    pub domain_bits: usize,
}

fn default_degree() -> usize {
    DEFAULT_POLY_DEGREE
}

impl PrfSpec {
    pub fn keyed_hash(domain_bits: usize) -> Self {
        Self {
            kind: PrfKind::KeyedHash,
            degree: DEFAULT_POLY_DEGREE,
            domain_bits,
        }
    }

    pub fn polynomial(domain_bits: usize, degree: usize) -> Self {
        Self {
            kind: PrfKind::Polynomial,
            degree,
            domain_bits,
        }
    }

    /// Same family on a different input length.
    pub fn with_domain(self, domain_bits: usize) -> Self {
        Self { domain_bits, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain_bits == 0 {
            return Err(out_of_range("domain bits", "must be at least 1"));
        }
        match self.kind {
            PrfKind::KeyedHash if self.domain_bits > MAX_HASH_DOMAIN_BITS => Err(out_of_range(
                "domain bits",
                format!("{} > {MAX_HASH_DOMAIN_BITS}", self.domain_bits),
            )),
            PrfKind::Polynomial if self.domain_bits > MAX_FIELD_BITS => Err(out_of_range(
                "domain bits",
                format!("field size 2^{} exceeds 2^{MAX_FIELD_BITS}", self.domain_bits),
            )),
            PrfKind::Polynomial if self.degree == 0 => Err(out_of_range("polynomial degree", "must be at least 1")),
            _ => Ok(()),
        }
    }
}

/// Carry-less product in GF(2^w) reduced by `modulus`.
pub fn gf_mul(a: u32, b: u32, w: usize, modulus: u32) -> u32 {
    let mut prod: u64 = 0;
    for i in 0..w {
        if (b >> i) & 1 == 1 {
            prod ^= (a as u64) << i;
        }
    }
    for i in (w..2 * w).rev() {
        if (prod >> i) & 1 == 1 {
            prod ^= (modulus as u64) << (i - w);
        }
    }
    prod as u32
}

pub fn irreducible_modulus(w: usize) -> Option<u32> {
    (1..=MAX_FIELD_BITS).contains(&w).then(|| IRREDUCIBLE[w])
}

#[derive(Clone)]
enum Family {
    Hash { mac: HmacSha256 },
    Poly { coeffs: Vec<u32>, modulus: u32 },
}

/// A keyed instance of a [`PrfSpec`], ready for repeated evaluation.
#[derive(Clone)]
pub struct Prf {
    spec: PrfSpec,
    family: Family,
}

impl Prf {
    pub fn new(key: &Key, spec: PrfSpec) -> Result<Self> {
        spec.validate()?;
        let family = match spec.kind {
            PrfKind::KeyedHash => {
                let mut mac = key.mac();
                mac.update(b"prdm/prf");
                mac.update(&[spec.domain_bits as u8]);
                Family::Hash { mac }
            }
            PrfKind::Polynomial => {
                let w = spec.domain_bits;
                let coeffs = poly_coefficients(key, spec.degree, w);
                Family::Poly {
                    coeffs,
                    modulus: IRREDUCIBLE[w],
                }
            }
        };
        Ok(Self { spec, family })
    }

    pub fn spec(&self) -> PrfSpec {
        self.spec
    }

    fn hash_block(mac: &HmacSha256, block: u64) -> [u8; 32] {
        let mut mac = mac.clone();
        mac.update(&block.to_be_bytes());
        mac.finalize().into_bytes().into()
    }

    /// f(x) for `x < 2^domain_bits`.
    pub fn eval(&self, x: u64) -> Result<bool> {
        if self.spec.domain_bits < 64 && x >> self.spec.domain_bits != 0 {
            return Err(out_of_range(
                "PRF input",
                format!("{x} has more than {} bits", self.spec.domain_bits),
            ));
        }
        Ok(match &self.family {
            Family::Hash { mac } => {
                let digest = Self::hash_block(mac, x >> 8);
                let r = (x & 0xFF) as usize;
                (digest[r / 8] >> (7 - r % 8)) & 1 == 1
            }
            Family::Poly { coeffs, modulus } => {
                let w = self.spec.domain_bits;
                let mut acc = 0u32;
                for &c in coeffs.iter().rev() {
                    acc = gf_mul(acc, x as u32, w, *modulus) ^ c;
                }
                acc & 1 == 1
            }
        })
    }

    /// Every output bit, indexed by input. Requires a dense-sized domain.
    pub fn table(&self) -> Result<Vec<bool>> {
        let bits = self.spec.domain_bits;
        crate::qcore::check_qubits(bits)?;
        let size = 1u64 << bits;
        match &self.family {
            Family::Hash { mac } => {
                let mut out = Vec::with_capacity(size as usize);
                for block in 0..size.div_ceil(256) {
                    let digest = Self::hash_block(mac, block);
                    let take = (size - block * 256).min(256) as usize;
                    out.extend((0..take).map(|r| (digest[r / 8] >> (7 - r % 8)) & 1 == 1));
                }
                Ok(out)
            }
            Family::Poly { .. } => (0..size).map(|x| self.eval(x)).collect(),
        }
    }
}

/// Coefficients are read straight from the key when it carries enough bits;
/// otherwise the key is stretched with SHA-256.
fn poly_coefficients(key: &Key, degree: usize, w: usize) -> Vec<u32> {
    let needed = (degree + 1) * w;
    let bits: Vec<bool> = if key.kappa() >= needed {
        (0..needed).map(|i| key.bit(i)).collect()
    } else {
        let mut stream = Vec::with_capacity(needed + 256);
        let mut counter = 0u32;
        while stream.len() < needed {
            let mut h = Sha256::new();
            h.update(b"prdm/poly");
            h.update((key.kappa() as u32).to_be_bytes());
            h.update(key.bytes());
            h.update(counter.to_be_bytes());
            let digest = h.finalize();
            stream.extend((0..256).map(|i| (digest[i / 8] >> (7 - i % 8)) & 1 == 1));
            counter += 1;
        }
        stream.truncate(needed);
        stream
    };
    bits.chunks(w)
        .map(|chunk| chunk.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32))
        .collect()
}

/// One-shot evaluation on an explicit bit string (most significant bit first).
pub fn prf_eval(key: &Key, spec: PrfSpec, x: &[bool]) -> Result<bool> {
    if x.len() != spec.domain_bits {
        return Err(Error::InputLength {
            expected: spec.domain_bits,
            got: x.len(),
        });
    }
    let index = x.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
    Prf::new(key, spec)?.eval(index)
}
