// Generated by {{generated_by}} for {{project}}. Changes are overwritten on regeneration.
'use strict';

const views = [
{{#each screens}}
  'views/{{.id}}.html',
{{/each}}
];

const handlers = {
{{#each action_screens}}
  '{{.id}}': require('./handlers/{{.id}}'),
{{/each}}
};

module.exports = { project: '{{project}}', views, handlers };
