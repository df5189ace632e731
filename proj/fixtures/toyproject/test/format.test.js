'use strict';

const assert = require('assert');
const { formatBytes, percent, describeRatio } = require('../src/format.js');

module.exports = (tests) => {
  tests.push({
    name: 'formatBytes picks a readable unit',
    fn: () => {
      assert.strictEqual(formatBytes(500), '500.0 B');
      assert.strictEqual(formatBytes(2048), '2.0 KB');
    },
  });
  tests.push({
    name: 'percent rounds to whole numbers',
    fn: () => {
      assert.strictEqual(percent(1, 4), '25%');
      assert.strictEqual(percent(2, 3), '67%');
      assert.strictEqual(percent(5, 0), '0%');
    },
  });
  tests.push({
    name: 'describeRatio reports usage below capacity',
    fn: () => {
      assert.strictEqual(describeRatio(1, 4), '25% of capacity');
    },
  });
};
