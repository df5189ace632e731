'use strict';

function total(items) {
  let sum = 0;
  for (const item of items) {
    sum += item;
  }
  return sum;
}

function indexOfMax(items) {
  if (items.length === 0) {
    return -1;
  }
  let best = 0;
  for (let i = 1; i < items.length; i++) {
    if (items[i] > items[best]) {
      best = i;
    }
  }
  return best;
}

function contains(items, target) {
  let i = 0;
  while (i < items.length) {
    if (items[i] === target) {
      return true;
    }
    i += 1;
  }
  return false;
}

module.exports = { total, indexOfMax, contains };
