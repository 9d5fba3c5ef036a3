//! Byte <-> trit bridge: six base-3 digits per byte, most significant first.
//! `3^6 = 729 > 256`, so the expansion is injective.

use crate::gf3::Gf3;

pub const TRITS_PER_BYTE: usize = 6;

pub fn bytes_to_trits(bytes: &[u8]) -> Vec<Gf3> {
    let mut out = Vec::with_capacity(bytes.len() * TRITS_PER_BYTE);
    for &b in bytes {
        let mut digits = [Gf3::ZERO; TRITS_PER_BYTE];
        let mut v = b as i64;
        for d in digits.iter_mut().rev() {
            *d = Gf3::from_i64(v % 3);
            v /= 3;
        }
        out.extend_from_slice(&digits);
    }
    out
}

/// Contracts trits back to bytes, stopping after `byte_len` bytes. Returns
/// `None` if a group encodes a value above 255 or the input is too short.
pub fn trits_to_bytes(trits: &[Gf3], byte_len: usize) -> Option<Vec<u8>> {
    if trits.len() < byte_len * TRITS_PER_BYTE {
        return None;
    }
    trits
        .chunks(TRITS_PER_BYTE)
        .take(byte_len)
        .map(|group| {
            let v = group
                .iter()
                .fold(0u32, |acc, t| acc * 3 + u32::from(t.value()));
            u8::try_from(v).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ff_expands_to_base_three() {
        // 255 = 1·243 + 0·81 + 0·27 + 1·9 + 1·3 + 0
        let t: Vec<u8> = bytes_to_trits(&[0xFF]).iter().map(|t| t.value()).collect();
        assert_eq!(t, vec![1, 0, 0, 1, 1, 0]);
        let t: Vec<u8> = bytes_to_trits(&[0, 1]).iter().map(|t| t.value()).collect();
        assert_eq!(t, vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn out_of_range_group_is_rejected() {
        assert_eq!(trits_to_bytes(&[Gf3::TWO; 6], 1), None);
        assert_eq!(trits_to_bytes(&[Gf3::ZERO; 5], 1), None);
        assert_eq!(trits_to_bytes(&[Gf3::ZERO; 12], 1), Some(vec![0]));
    }

    proptest! {
        #[test]
        fn round_trip(bytes in proptest::collection::vec(any::<u8>(), 0..64), pad in 0usize..10) {
            let mut t = bytes_to_trits(&bytes);
            t.extend(std::iter::repeat_n(Gf3::ZERO, pad));
            prop_assert_eq!(trits_to_bytes(&t, bytes.len()), Some(bytes));
        }
    }
}
