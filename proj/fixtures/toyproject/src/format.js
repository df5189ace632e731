'use strict';

const UNITS = ['B', 'KB', 'MB', 'GB'];

function formatBytes(n) {
  let size = n;
  let unit = 0;
  while (size >= 1024 && unit < UNITS.length - 1) {
    size /= 1024;
    unit += 1;
  }
  return size.toFixed(1) + ' ' + UNITS[unit];
}

function percent(part, whole) {
  if (whole === 0) {
    return '0%';
  }
  return Math.round((part / whole) * 100) + '%';
}

function describeRatio(part, whole) {
  const pct = percent(part, whole);
  if (part > whole) {
    return 'over capacity at ' + pct;
  }
  return pct + ' of capacity';
}

module.exports = { formatBytes, percent, describeRatio };
