use num_bigint::BigInt;
use num_traits::One;

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `S(k, 0..=k)`, Stirling numbers of the second kind.
pub(crate) fn stirling2_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for n in 1..=k {
        let mut next = vec![BigInt::from(0); n + 1];
        for j in 1..=n {
            let carry = if j < n { &row[j] * j } else { BigInt::from(0) };
            next[j] = &row[j - 1] + carry;
        }
        row = next;
    }
    row
}
