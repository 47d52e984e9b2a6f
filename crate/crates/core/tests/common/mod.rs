#![allow(dead_code)]

pub mod criteria;
pub mod oracle;
pub mod props;

use positivity_core::numbers::{int, rat};
use positivity_core::{Certificate, Matrix, Poly, Radius, Rational, Recurrence};

pub fn poly(c: &[i64]) -> Poly<Rational> {
    Poly::new(c.iter().map(|&x| int(x)).collect())
}

pub fn grz() -> Recurrence {
    Recurrence::new(
        vec![
            poly(&[-383201280, -1500622848, -2308829184, -1765380096, -701374464, -138018816, -10616832]),
            poly(&[-224985600, -640811520, -746896896, -453150720, -150073344, -25657344, -1769472]),
            poly(&[-30421440, -74657088, -75175488, -39696768, -11582208, -1769472, -110592]),
            poly(&[2708160, 5889032, 5258744, 2473952, 647744, 89600, 5120]),
            poly(&[24640, 51376, 43628, 19353, 4738, 608, 32]),
        ],
        vec![int(1), int(0), int(216), int(18816)],
    )
    .unwrap()
}

pub fn grz_cert() -> Certificate {
    Certificate {
        t: Matrix::from_ints(&[&[1, 0, 0, 0], &[-1, 1, 0, 0], &[0, -2, 1, 0], &[-3000, -1000, -40, 1]]),
        r: Radius::Infinite,
        n: 3,
        m: 1,
    }
}

pub fn order3() -> Recurrence {
    Recurrence::new(
        vec![poly(&[60, 18]), poly(&[90, -65]), poly(&[60, 77]), poly(&[30, 30])],
        vec![int(1), rat(15, 14), rat(8, 7)],
    )
    .unwrap()
}

pub fn order3_cert() -> Certificate {
    let t = Matrix::from_rows(vec![
        vec![rat(-36, 7), rat(76, 7), rat(-33, 7)],
        vec![rat(162, 7), rat(-405, 7), rat(250, 7)],
        vec![rat(303, 14), rat(-4783, 84), rat(3049, 84)],
    ])
    .unwrap();
    Certificate { t, r: Radius::Finite(rat(5, 3)), n: 3040, m: 1 }
}

/// `2(n+2)^2 u_{n+2} = (81n^2+243n+186) u_{n+1} - 81(3n+2)(3n+4) u_n`.
pub fn straub() -> Recurrence {
    Recurrence::new(vec![poly(&[-648, -1458, -729]), poly(&[186, 243, 81]), poly(&[8, 8, 2])], vec![int(1), int(12)]).unwrap()
}

/// `(n+2)^3 u_{n+2} = (2n+3)(17n^2+51n+39) u_{n+1} - (n+1)^3 u_n`.
pub fn apery() -> Recurrence {
    Recurrence::new(vec![poly(&[-1, -3, -3, -1]), poly(&[117, 231, 153, 34]), poly(&[8, 12, 6, 1])], vec![int(1), int(5)])
        .unwrap()
}

fn rec(coeffs: &[&[i64]], initial: &[i64]) -> Recurrence {
    Recurrence::new(coeffs.iter().map(|c| poly(c)).collect(), initial.iter().map(|&x| int(x)).collect()).unwrap()
}

/// Ten recurrences with a unique simple positive dominant eigenvalue,
/// named, with their usual initial values.
pub fn corpus() -> Vec<(&'static str, Recurrence)> {
    vec![
        ("straub", straub()),
        ("apery", apery()),
        ("fibonacci", rec(&[&[1], &[1], &[1]], &[1, 1])),
        ("tribonacci", rec(&[&[1], &[1], &[1], &[1]], &[1, 1, 1])),
        ("catalan", rec(&[&[2, 4], &[2, 1]], &[1])),
        // (n+2)^2 u_{n+2} = (7n^2+21n+16) u_{n+1} + 8(n+1)^2 u_n
        ("franel", rec(&[&[8, 16, 8], &[16, 21, 7], &[4, 4, 1]], &[1, 2])),
        // (n+2) u_{n+2} = 3(2n+3) u_{n+1} - (n+1) u_n
        ("delannoy", rec(&[&[-1, -1], &[9, 6], &[2, 1]], &[1, 3])),
        // (n+2)^2 u_{n+2} = (11n^2+33n+25) u_{n+1} + (n+1)^2 u_n
        ("apery_zeta2", rec(&[&[1, 2, 1], &[25, 33, 11], &[4, 4, 1]], &[1, 3])),
        // (n+4) u_{n+2} = (2n+5) u_{n+1} + 3(n+1) u_n
        ("motzkin", rec(&[&[3, 3], &[5, 2], &[4, 1]], &[1, 1])),
        ("two_pow_plus_one", rec(&[&[-2], &[3], &[1]], &[2, 3])),
    ]
}
