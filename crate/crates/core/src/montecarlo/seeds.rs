/// Stream seed of run `index` under `master`.
///
/// SplitMix64 step followed by its output finalizer:
///
/// ```text
/// z = master + (index + 1)·0x9E3779B97F4A7C15        (mod 2⁶⁴)
/// z = (z ⊕ (z ≫ 30))·0xBF58476D1CE4E5B9
/// z = (z ⊕ (z ≫ 27))·0x94D049BB133111EB
/// seed = z ⊕ (z ≫ 31)
/// ```
///
/// Every step is a bijection of `u64`, so distinct indices never share a seed
/// under one master seed.
pub fn seed_for_run(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
