'use strict';

const assert = require('assert');
const { titleCase, countChars } = require('../src/strings.js');

module.exports = (tests) => {
  tests.push({
    name: 'titleCase capitalizes each word',
    fn: () => {
      assert.strictEqual(titleCase('hello brave world'), 'Hello Brave World');
    },
  });
  tests.push({
    name: 'titleCase skips extra spaces',
    fn: () => {
      assert.strictEqual(titleCase('one  two'), 'One Two');
    },
  });
  tests.push({
    name: 'countChars tallies characters',
    fn: () => {
      assert.deepStrictEqual(countChars('aba'), { a: 2, b: 1 });
      assert.deepStrictEqual(countChars(''), {});
    },
  });
};
