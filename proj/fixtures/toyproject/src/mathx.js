'use strict';

function clamp(value, low, high) {
  if (value < low) {
    return low;
  }
  if (value > high) {
    return high;
  }
  return value;
}

function sumTo(n) {
  let total = 0;
  for (let i = 1; i <= n; i++) {
    total += i;
  }
  return total;
}

function gcd(a, b) {
  while (b !== 0) {
    const r = a % b;
    a = b;
    b = r;
  }
  return a;
}

function factorial(n) {
  let acc = 1;
  let i = 1;
  do {
    acc *= i;
    i += 1;
  } while (i <= n);
  return acc;
}

function signLabel(n) {
  switch (Math.sign(n)) {
    case 1:
      return 'positive';
    case -1:
      return 'negative';
    default:
      return 'zero';
  }
}

module.exports = { clamp, sumTo, gcd, factorial, signLabel };
