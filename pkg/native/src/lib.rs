//! Native BLS12-381 kernels for silentledger.
//!
//! Exposes G1/G2/Gt element types, pairing products, Pippenger MSM, a
//! generator-folding kernel for the inner-product argument, and the
//! baby-step giant-step solver. Scalars cross the boundary as Python ints
//! and are reduced modulo the group order on entry.

use std::collections::HashMap;
use std::sync::OnceLock;

use blstrs::{Bls12, G1Affine, G1Projective, G2Affine, G2Prepared, G2Projective, Gt, Scalar};
use group::{Curve, Group};
use num_bigint::{BigInt, Sign};
use ::pairing::{MillerLoopResult, MultiMillerLoop};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

const ORDER_HEX: &str = "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
// Effective cofactor for G1 (1 - z), used only for hashing onto the subgroup.
const G1_H_EFF: u64 = 0xd201000000010001;

fn order() -> &'static BigInt {
    static Q: OnceLock<BigInt> = OnceLock::new();
    Q.get_or_init(|| BigInt::parse_bytes(ORDER_HEX.as_bytes(), 16).unwrap())
}

fn to_scalar(k: &BigInt) -> Scalar {
    let q = order();
    let mut r = k % q;
    if r.sign() == Sign::Minus {
        r += q;
    }
    let (_, mut le) = r.to_bytes_le();
    le.resize(32, 0);
    let mut buf = [0u8; 32];
    buf.copy_from_slice(&le);
    Scalar::from_bytes_le(&buf).unwrap()
}

fn decode_err(kind: &str) -> PyErr {
    PyValueError::new_err(kind.to_string())
}

/// Shared flag-bit validation for the ZCash compressed format.
/// Returns Ok(true) for the canonical identity encoding.
fn check_flags(bytes: &[u8]) -> PyResult<bool> {
    let b0 = bytes[0];
    if b0 & 0x80 == 0 {
        return Err(decode_err("encoding"));
    }
    if b0 & 0x40 != 0 {
        let rest_zero = (b0 & 0x3f) == 0 && bytes[1..].iter().all(|&b| b == 0);
        if !rest_zero {
            return Err(decode_err("encoding"));
        }
        return Ok(true);
    }
    Ok(false)
}

const MODULUS_BE: [u8; 48] = [0x1a, 0x01, 0x11, 0xea, 0x39, 0x7f, 0xe6, 0x9a, 0x4b, 0x1b, 0xa7, 0xb6, 0x43, 0x4b, 0xac, 0xd7, 0x64, 0x77, 0x4b, 0x84, 0xf3, 0x85, 0x12, 0xbf, 0x67, 0x30, 0xd2, 0xa0, 0xf6, 0xb0, 0xf6, 0x24, 0x1e, 0xab, 0xff, 0xfe, 0xb1, 0x53, 0xff, 0xff, 0xb9, 0xfe, 0xff, 0xff, 0xff, 0xff, 0xaa, 0xab];

/// Big-endian field element strictly below the base-field modulus.
fn fp_canonical(be: &[u8]) -> bool {
    be < &MODULUS_BE[..]
}

#[pyclass(module = "silentledger._native", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct G1 {
    p: G1Projective,
}

#[pymethods]
impl G1 {
    #[staticmethod]
    fn generator() -> Self {
        G1 { p: G1Projective::generator() }
    }

    #[staticmethod]
    fn identity() -> Self {
        G1 { p: G1Projective::identity() }
    }

    fn __add__(&self, other: &G1) -> G1 {
        G1 { p: self.p + other.p }
    }

    fn __sub__(&self, other: &G1) -> G1 {
        G1 { p: self.p - other.p }
    }

    fn __neg__(&self) -> G1 {
        G1 { p: -self.p }
    }

    fn __mul__(&self, k: BigInt) -> G1 {
        G1 { p: self.p * to_scalar(&k) }
    }

    fn __rmul__(&self, k: BigInt) -> G1 {
        self.__mul__(k)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<G1>() {
            Ok(o) => self.p == o.get().p,
            Err(_) => false,
        }
    }

    fn __hash__(&self) -> u64 {
        let c = self.p.to_affine().to_compressed();
        u64::from_le_bytes(c[40..48].try_into().unwrap())
    }

    fn __repr__(&self) -> String {
        let c = self.p.to_affine().to_compressed();
        let hex: String = c[..8].iter().map(|b| format!("{:02x}", b)).collect();
        format!("G1({}..)", hex)
    }

    fn is_identity(&self) -> bool {
        bool::from(self.p.is_identity())
    }

    fn double(&self) -> G1 {
        G1 { p: self.p.double() }
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.p.to_affine().to_compressed())
    }

    /// Decode a 48-byte compressed point; errors carry one of
    /// "length", "encoding", "curve", "subgroup".
    #[staticmethod]
    #[pyo3(signature = (data, check_subgroup = true))]
    fn from_bytes(data: &[u8], check_subgroup: bool) -> PyResult<G1> {
        if data.len() != 48 {
            return Err(decode_err("length"));
        }
        if check_flags(data)? {
            return Ok(G1::identity());
        }
        let mut x = [0u8; 48];
        x.copy_from_slice(data);
        x[0] &= 0x1f;
        if !fp_canonical(&x) {
            return Err(decode_err("encoding"));
        }
        let mut buf = [0u8; 48];
        buf.copy_from_slice(data);
        let a = G1Affine::from_compressed_unchecked(&buf);
        if bool::from(a.is_none()) {
            return Err(decode_err("curve"));
        }
        let a = a.unwrap();
        if !bool::from(a.is_on_curve()) {
            return Err(decode_err("curve"));
        }
        if check_subgroup && !bool::from(a.is_torsion_free()) {
            return Err(decode_err("subgroup"));
        }
        Ok(G1 { p: a.into() })
    }

    /// Map an on-curve point into the prime-order subgroup by multiplying
    /// with the effective cofactor. Plain double-and-add: the backend's
    /// endomorphism-based multiplication assumes subgroup membership.
    fn clear_cofactor(&self) -> G1 {
        let mut acc = G1Projective::identity();
        for i in (0..64).rev() {
            acc = acc.double();
            if (G1_H_EFF >> i) & 1 == 1 {
                acc += &self.p;
            }
        }
        G1 { p: acc }
    }

    fn in_subgroup(&self) -> bool {
        bool::from(self.p.to_affine().is_torsion_free())
    }
}

#[pyclass(module = "silentledger._native", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct G2 {
    p: G2Projective,
}

#[pymethods]
impl G2 {
    #[staticmethod]
    fn generator() -> Self {
        G2 { p: G2Projective::generator() }
    }

    #[staticmethod]
    fn identity() -> Self {
        G2 { p: G2Projective::identity() }
    }

    fn __add__(&self, other: &G2) -> G2 {
        G2 { p: self.p + other.p }
    }

    fn __sub__(&self, other: &G2) -> G2 {
        G2 { p: self.p - other.p }
    }

    fn __neg__(&self) -> G2 {
        G2 { p: -self.p }
    }

    fn __mul__(&self, k: BigInt) -> G2 {
        G2 { p: self.p * to_scalar(&k) }
    }

    fn __rmul__(&self, k: BigInt) -> G2 {
        self.__mul__(k)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<G2>() {
            Ok(o) => self.p == o.get().p,
            Err(_) => false,
        }
    }

    fn __hash__(&self) -> u64 {
        let c = self.p.to_affine().to_compressed();
        u64::from_le_bytes(c[88..96].try_into().unwrap())
    }

    fn __repr__(&self) -> String {
        let c = self.p.to_affine().to_compressed();
        let hex: String = c[..8].iter().map(|b| format!("{:02x}", b)).collect();
        format!("G2({}..)", hex)
    }

    fn is_identity(&self) -> bool {
        bool::from(self.p.is_identity())
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.p.to_affine().to_compressed())
    }

    #[staticmethod]
    #[pyo3(signature = (data, check_subgroup = true))]
    fn from_bytes(data: &[u8], check_subgroup: bool) -> PyResult<G2> {
        if data.len() != 96 {
            return Err(decode_err("length"));
        }
        if check_flags(data)? {
            return Ok(G2::identity());
        }
        let mut c1 = [0u8; 48];
        c1.copy_from_slice(&data[..48]);
        c1[0] &= 0x1f;
        if !fp_canonical(&c1) || !fp_canonical(&data[48..]) {
            return Err(decode_err("encoding"));
        }
        let mut buf = [0u8; 96];
        buf.copy_from_slice(data);
        let a = G2Affine::from_compressed_unchecked(&buf);
        if bool::from(a.is_none()) {
            return Err(decode_err("curve"));
        }
        let a = a.unwrap();
        if !bool::from(a.is_on_curve()) {
            return Err(decode_err("curve"));
        }
        if check_subgroup && !bool::from(a.is_torsion_free()) {
            return Err(decode_err("subgroup"));
        }
        Ok(G2 { p: a.into() })
    }
}

/// Target-group element, written multiplicatively on the Python side.
#[pyclass(module = "silentledger._native", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct GT {
    v: Gt,
}

#[pymethods]
impl GT {
    #[staticmethod]
    fn identity() -> Self {
        GT { v: Gt::identity() }
    }

    fn __mul__(&self, other: &GT) -> GT {
        GT { v: self.v + other.v }
    }

    fn __truediv__(&self, other: &GT) -> GT {
        GT { v: self.v - other.v }
    }

    fn __pow__(&self, k: BigInt, _modulo: Option<Py<PyAny>>) -> GT {
        GT { v: self.v * to_scalar(&k) }
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<GT>() {
            Ok(o) => self.v == o.get().v,
            Err(_) => false,
        }
    }

    fn is_identity(&self) -> bool {
        bool::from(self.v.is_identity())
    }

    fn __repr__(&self) -> String {
        "GT(..)".to_string()
    }
}

#[pyfunction]
#[pyo3(name = "pairing")]
fn pair(p: &G1, q: &G2) -> GT {
    GT { v: blstrs::pairing(&p.p.to_affine(), &q.p.to_affine()) }
}

/// True iff the product of e(P_i, Q_i) is the identity of GT.
#[pyfunction]
fn pairing_product_is_one(py: Python<'_>, pairs: Vec<(G1, G2)>) -> bool {
    py.detach(move || {
        let g1: Vec<G1Affine> = pairs.iter().map(|(p, _)| p.p.to_affine()).collect();
        let g2: Vec<G2Prepared> = pairs.iter().map(|(_, q)| G2Prepared::from(q.p.to_affine())).collect();
        let terms: Vec<(&G1Affine, &G2Prepared)> = g1.iter().zip(g2.iter()).collect();
        let r = Bls12::multi_miller_loop(&terms).final_exponentiation();
        bool::from(r.is_identity())
    })
}

fn msm_inner(points: &[G1Projective], scalars: &[Scalar]) -> G1Projective {
    // blst's Pippenger has overhead below a handful of terms
    if points.len() < 4 {
        return points.iter().zip(scalars).map(|(p, s)| p * s).sum();
    }
    G1Projective::multi_exp(points, scalars)
}

#[pyfunction]
fn msm(py: Python<'_>, points: Vec<G1>, scalars: Vec<BigInt>) -> PyResult<G1> {
    if points.len() != scalars.len() {
        return Err(PyValueError::new_err("msm: length mismatch"));
    }
    let pts: Vec<G1Projective> = points.iter().map(|g| g.p).collect();
    let sc: Vec<Scalar> = scalars.iter().map(to_scalar).collect();
    Ok(G1 { p: py.detach(move || msm_inner(&pts, &sc)) })
}

/// Element-wise a*lo[i] + b*hi[i]; one inner-product-argument folding round.
#[pyfunction]
fn fold(py: Python<'_>, lo: Vec<G1>, hi: Vec<G1>, a: BigInt, b: BigInt) -> PyResult<Vec<G1>> {
    if lo.len() != hi.len() {
        return Err(PyValueError::new_err("fold: length mismatch"));
    }
    let (sa, sb) = (to_scalar(&a), to_scalar(&b));
    let lo: Vec<G1Projective> = lo.iter().map(|g| g.p).collect();
    let hi: Vec<G1Projective> = hi.iter().map(|g| g.p).collect();
    let out = py.detach(move || {
        lo.iter()
            .zip(hi.iter())
            .map(|(l, h)| l * sa + h * sb)
            .collect::<Vec<_>>()
    });
    Ok(out.into_iter().map(|p| G1 { p }).collect())
}

fn batch_affine(points: &[G1Projective]) -> Vec<blst::blst_p1_affine> {
    let raw: Vec<blst::blst_p1> = points.iter().map(|p| *p.as_ref()).collect();
    let ptrs: Vec<*const blst::blst_p1> = raw.iter().map(|p| p as *const _).collect();
    let mut out = vec![blst::blst_p1_affine::default(); points.len()];
    if !points.is_empty() {
        unsafe { blst::blst_p1s_to_affine(out.as_mut_ptr(), ptrs.as_ptr(), points.len()) };
    }
    out
}

const BATCH: usize = 512;

/// Baby-step table {j*base : 0 <= j < m}, keyed by the low limb of the
/// affine x coordinate (Montgomery form; a bijection, so collisions are only
/// possible between distinct points sharing a limb and are resolved by the
/// overflow list). Immutable once built.
#[pyclass(module = "silentledger._native", frozen)]
struct BabySteps {
    base: G1Projective,
    m: u64,
    table: HashMap<u64, u32>,
    overflow: Vec<(u64, u32)>,
}

impl BabySteps {
    fn lookup(&self, key: u64, cand: &G1Projective, giant: u64) -> Option<u64> {
        let check = |j: u32| -> Option<u64> {
            let v = giant * self.m + j as u64;
            // cand = target - giant*m*base; confirm j*base == cand
            let jp = self.base * Scalar::from(j as u64);
            if jp == *cand {
                Some(v)
            } else {
                None
            }
        };
        if let Some(&j) = self.table.get(&key) {
            if let Some(v) = check(j) {
                return Some(v);
            }
        }
        for &(k, j) in &self.overflow {
            if k == key {
                if let Some(v) = check(j) {
                    return Some(v);
                }
            }
        }
        None
    }
}

#[pymethods]
impl BabySteps {
    #[new]
    fn new(py: Python<'_>, base: &G1, m: u64) -> PyResult<Self> {
        if m == 0 || m > (1u64 << 30) {
            return Err(PyValueError::new_err("baby-step count out of range"));
        }
        let b = base.p;
        let (table, overflow) = py.detach(move || {
            let mut table: HashMap<u64, u32> = HashMap::with_capacity(m as usize);
            let mut overflow = Vec::new();
            let mut cur = G1Projective::identity();
            let mut j: u64 = 0;
            while j < m {
                let n = std::cmp::min(BATCH as u64, m - j) as usize;
                let mut chunk = Vec::with_capacity(n);
                for _ in 0..n {
                    chunk.push(cur);
                    cur += &b;
                }
                for (i, a) in batch_affine(&chunk).iter().enumerate() {
                    let key = a.x.l[0];
                    let idx = (j + i as u64) as u32;
                    if table.contains_key(&key) {
                        overflow.push((key, idx));
                    } else {
                        table.insert(key, idx);
                    }
                }
                j += n as u64;
            }
            (table, overflow)
        });
        Ok(BabySteps { base: b, m, table, overflow })
    }

    #[getter]
    fn m(&self) -> u64 {
        self.m
    }

    fn __len__(&self) -> usize {
        self.table.len() + self.overflow.len()
    }

    /// Smallest-giant-step v with target == v*base and v < m*giant_steps.
    fn solve(&self, py: Python<'_>, target: &G1, giant_steps: u64) -> Option<u64> {
        let t = target.p;
        py.detach(|| {
            let stride = -(self.base * Scalar::from(self.m));
            let stride_aff = stride.to_affine();
            let mut cur = t;
            let mut i: u64 = 0;
            while i < giant_steps {
                let n = std::cmp::min(BATCH as u64, giant_steps - i) as usize;
                let mut chunk = Vec::with_capacity(n);
                for _ in 0..n {
                    chunk.push(cur);
                    cur += &stride_aff;
                }
                for (k, a) in batch_affine(&chunk).iter().enumerate() {
                    if let Some(v) = self.lookup(a.x.l[0], &chunk[k], i + k as u64) {
                        return Some(v);
                    }
                }
                i += n as u64;
            }
            None
        })
    }
}

#[pyfunction]
fn group_order() -> BigInt {
    order().clone()
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<G1>()?;
    m.add_class::<G2>()?;
    m.add_class::<GT>()?;
    m.add_class::<BabySteps>()?;
    m.add_function(wrap_pyfunction!(pair, m)?)?;
    m.add_function(wrap_pyfunction!(pairing_product_is_one, m)?)?;
    m.add_function(wrap_pyfunction!(msm, m)?)?;
    m.add_function(wrap_pyfunction!(fold, m)?)?;
    m.add_function(wrap_pyfunction!(group_order, m)?)?;
    Ok(())
}
