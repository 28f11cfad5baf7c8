//! Example families and tables kept as data, so the `examples`
//! subcommand and the acceptance suite replay the same fixtures.

/// The fourteen `d = 2`, `t = u = 2` rows: `(a, b, indices, roots)`.
/// Sequences are `alpha = a + b^2 sqrt2` stepped by `eps^2 = 3 + 2 sqrt2`.
pub const TABLE_D2: &[(u64, u64, [i64; 4], [u64; 4])] = &[
    (1, 3, [0, -1, 3, -5], [3, 5, 31, 167]),
    (1019, 27, [0, 1, -3, -7], [27, 65, 29, 983]),
    (167, 13, [0, 1, -3, 4], [13, 29, 71, 407]),
    (157, 29, [0, -1, 3, -4], [29, 47, 307, 649]),
    (1, 41, [0, -1, -9, 11], [41, 71, 80753, 470861]),
    (1633, 65, [0, -1, -4, 7], [65, 97, 1331, 24791]),
    (48479, 211, [0, -3, 4, -7], [211, 1007, 6743, 34205]),
    (45649, 677, [0, -1, -4, 4], [677, 1133, 15679, 16825]),
    (1940147, 1217, [0, -3, 4, -11], [1217, 3289, 40573, 3794239]),
    (600589, 2213, [0, -1, -4, 4], [2213, 3673, 50801, 55415]),
    (20509501, 8689, [0, -1, 3, -4], [8689, 13619, 94393, 187603]),
    (
        255488029,
        13457,
        [0, -1, 3, -4],
        [13457, 5683, 189241, 15821],
    ),
    (
        409660129,
        17023,
        [0, -1, -4, -8],
        [17023, 7073, 7949, 269495],
    ),
    (
        3032771269,
        46313,
        [0, -1, -4, -8],
        [46313, 19213, 15269, 516625],
    ),
];

/// Further four-square examples: `(d, t, u, a, b)`.
pub const EXTRA_FOUR_SQUARES: &[(u64, u64, u64, u64, u64)] = &[
    (3, 4, 2, 672, 91),
    (6, 10, 4, 78, 7),
    (6, 10, 4, 34986, 149),
    (6, 10, 4, 3663828, 2257),
    (30, 22, 4, 826320, 1111),
    (37, 12, 2, 138, 5),
];

/// Step-1 examples: `(d, t, u, a, b, &[(k, root)])`.
pub const STEP1_EXAMPLES: &[(u64, u64, u64, u64, u64, &[(i64, u64)])] = &[
    (5, 1, 1, 43, 3, &[(-3, 5), (0, 3), (11, 53)]),
    (10, 6, 2, 1, 1, &[(0, 1), (1, 2), (2, 5)]),
    (5, 1, 1, 7, 1, &[(-9, 9), (0, 1), (1, 2), (3, 3)]),
    (6, 10, 4, 2, 3, &[(-3, 63), (0, 3), (1, 7), (3, 69)]),
];

/// Prime-power step-1 examples: `(d, t, u, a, b, &[(k, root)])`.
pub const STEP1_PRIME_POWER: &[(u64, u64, u64, u64, u64, &[(i64, u64)])] = &[
    (5, 1, 1, 153, 4, &[(-3, 11), (0, 4), (30, 8862)]),
    (51, 100, 14, 2, 1, &[(-1, 6), (0, 1), (1, 8)]),
];

/// The three-squares family with `u = 2`: for odd `n >= 5`,
/// `a = (n^2-9)/4`, `d = (n^4-2n^2+17)/16`, `t = (n^2-1)/2`, and
/// `y_1 = ((n^2-3)/2)^2`, `y_(-1) = n^2`.
pub fn family_n_odd(n: u64) -> (u64, u64, u64, u64) {
    let a = (n * n - 9) / 4;
    let d = (n * n * n * n - 2 * n * n + 17) / 16;
    let t = (n * n - 1) / 2;
    (a, d, t, 2)
}

/// The second family: `n = 1 mod 4`, `n > 5`, `5` not dividing `n`;
/// `a = (n-5)/4`, `d = (n^2+6n+25)/16`, `t = 2a+4`, `u = 2`,
/// `N_alpha = -n`, `y_1 = ((n+1)/2)^2`.
pub fn family_n_1mod4(n: u64) -> (u64, u64, u64, u64) {
    let a = (n - 5) / 4;
    let d = (n * n + 6 * n + 25) / 16;
    (a, d, 2 * a + 4, 2)
}

/// The case-(a) family: `a = 2`, `u = 1`, `d = t^2 + 4` with
/// `y_1 = ((t+1)^2 + 1)/2` a square. Admissible `t` come from the
/// negative Pell solutions `T^2 - 2 s^2 = -1` via `t = T - 1` filtered
/// by `t = 6 mod 8` (equivalently `N_alpha = -t^2 = 12 mod 16`); only
/// every second Pell solution passes the filter, so the roots satisfy
/// `s_(n+1) = 34 s_n - s_(n-1)` while consecutive admissible `t` do
/// not obey that recurrence. Quoted seed pairs that apply it to `t`
/// directly skip t = 8118; the generator derives `t` from the Pell
/// condition instead.
pub fn family_case_a(count: usize) -> Vec<(u64, u64)> {
    // T^2 - 2 s^2 = -1: (T, s) = (1,1), (7,5), (41,29), ...
    let mut t_big: u128 = 1;
    let mut s: u128 = 1;
    let mut out = Vec::new();
    while out.len() < count {
        let t = t_big - 1;
        if t % 8 == 6 {
            out.push((t as u64, s as u64));
        }
        let (nt, ns) = (3 * t_big + 4 * s, 2 * t_big + 3 * s);
        t_big = nt;
        s = ns;
    }
    out
}

/// Tight lower-bound family: `a = 2n^2 - 3` (5 not dividing a),
/// `d = 4n^4 - 8n^2 + 8`, `(t, u) = (a+1, 1)`, `N_alpha = 1 - 4n^2`,
/// `y_(-1) = n^2`.
pub fn family_tight_lower_bound(n: u64) -> Option<(u64, u64, u64, u64)> {
    let a = 2 * n * n - 3;
    if a % 5 == 0 {
        return None;
    }
    let d = 4 * n * n * n * n - 8 * n * n + 8;
    Some((a, d, a + 1, 1))
}
