'use strict';

function merge(base, extra) {
  const out = {};
  for (const key in base) {
    out[key] = base[key];
  }
  for (const key in extra) {
    out[key] = extra[key];
  }
  return out;
}

function pick(source, keys) {
  const out = {};
  for (const key of keys) {
    if (key in source) {
      out[key] = source[key];
    }
  }
  return out;
}

module.exports = { merge, pick };
