'use strict';

function titleCase(sentence) {
  const words = sentence.split(' ');
  const parts = [];
  for (const word of words) {
    if (word === '') {
      continue;
    }
    parts.push(word[0].toUpperCase() + word.slice(1));
  }
  return parts.join(' ');
}

function countChars(text) {
  const counts = {};
  for (const ch of text) {
    counts[ch] = (counts[ch] || 0) + 1;
  }
  return counts;
}

module.exports = { titleCase, countChars };
