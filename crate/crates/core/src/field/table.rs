//! Built-in reduction polynomials for GF(2^s), s = 1..=128.
//!
//! Entry `s - 1` holds the low `s` bits of a degree-`s` irreducible polynomial
//! (the leading `x^s` term is implicit). Trinomials are preferred where one
//! exists; degrees 8, 16, 32, 64 and 128 use the conventional AES/GHASH-style
//! pentanomials.

pub(crate) const REDUCTION_LOW_BITS: [u128; 128] = [
    0x1,
    0x3,
    0x3,
    0x3,
    0x5,
    0x3,
    0x3,
    0x1b,
    0x3,
    0x9,
    0x5,
    0x9,
    0x1b,
    0x21,
    0x3,
    0x2b,
    0x9,
    0x9,
    0x27,
    0x9,
    0x5,
    0x3,
    0x21,
    0x1b,
    0x9,
    0x1b,
    0x27,
    0x3,
    0x5,
    0x3,
    0x9,
    0x8d,
    0x401,
    0x81,
    0x5,
    0x201,
    0x53,
    0x63,
    0x11,
    0x39,
    0x9,
    0x81,
    0x59,
    0x21,
    0x1b,
    0x3,
    0x21,
    0x2d,
    0x201,
    0x1d,
    0x4b,
    0x9,
    0x47,
    0x201,
    0x81,
    0x95,
    0x11,
    0x80001,
    0x95,
    0x3,
    0x27,
    0x20000001,
    0x3,
    0x1b,
    0x40001,
    0x9,
    0x27,
    0x201,
    0x65,
    0x2b,
    0x41,
    0x609,
    0x2000001,
    0x800000001,
    0x4b,
    0x200001,
    0x65,
    0x69,
    0x201,
    0x215,
    0x11,
    0x10b,
    0x95,
    0x21,
    0x107,
    0x200001,
    0x2001,
    0xc5,
    0x4000000001,
    0x8000001,
    0x123,
    0x200001,
    0x5,
    0x200001,
    0x801,
    0x641,
    0x41,
    0x801,
    0x4b,
    0x8001,
    0xc3,
    0x20000001,
    0x201,
    0x1b,
    0x11,
    0x8001,
    0x291,
    0x20001,
    0x35,
    0x200000001,
    0x401,
    0x39,
    0x201,
    0x2d,
    0x1a1,
    0x17,
    0x27,
    0x200000001,
    0x101,
    0x1b,
    0x40001,
    0x47,
    0x5,
    0x80001,
    0xe1,
    0x200001,
    0x3,
    0x87,
];
