'use strict';

// Applies component props carried as data attributes to the rendered inputs.
document.addEventListener('DOMContentLoaded', () => {
  for (const box of document.querySelectorAll('.component')) {
    const input = box.querySelector('input');
    if (!input) {
      continue;
    }
    if (box.dataset.masked === 'true') {
      input.type = 'password';
    }
    if (box.dataset.max_length) {
      input.maxLength = Number(box.dataset.max_length);
    }
    if (box.dataset.placeholder) {
      input.placeholder = box.dataset.placeholder;
    }
    if (box.dataset.options !== undefined) {
      const select = document.createElement('select');
      select.id = input.id;
      select.name = input.name;
      for (const value of box.dataset.options.split(',').filter(Boolean)) {
        select.add(new Option(value, value));
      }
      input.replaceWith(select);
    }
  }
});
