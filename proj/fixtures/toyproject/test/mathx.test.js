'use strict';

const assert = require('assert');
const { clamp, sumTo, gcd, factorial, signLabel } = require('../src/mathx.js');

module.exports = (tests) => {
  tests.push({
    name: 'clamp keeps values inside the range',
    fn: () => {
      assert.strictEqual(clamp(-5, 0, 10), 0);
      assert.strictEqual(clamp(15, 0, 10), 10);
      assert.strictEqual(clamp(7, 0, 10), 7);
    },
  });
  tests.push({
    name: 'sumTo adds 1..n',
    fn: () => {
      assert.strictEqual(sumTo(4), 10);
      assert.strictEqual(sumTo(1), 1);
      assert.strictEqual(sumTo(0), 0);
    },
  });
  tests.push({
    name: 'gcd of common cases',
    fn: () => {
      assert.strictEqual(gcd(12, 8), 4);
      assert.strictEqual(gcd(7, 3), 1);
      assert.strictEqual(gcd(5, 0), 5);
    },
  });
  tests.push({
    name: 'factorial of small numbers',
    fn: () => {
      assert.strictEqual(factorial(5), 120);
      assert.strictEqual(factorial(1), 1);
    },
  });
  tests.push({
    name: 'signLabel covers all branches',
    fn: () => {
      assert.strictEqual(signLabel(9), 'positive');
      assert.strictEqual(signLabel(-2), 'negative');
      assert.strictEqual(signLabel(0), 'zero');
    },
  });
};
