// Generated by {{generated_by}} for {{project}}. Changes are overwritten on regeneration.
// Request handler for the "{{screen.title_str}}" screen.
'use strict';

{{#each screen.entities}}
const { {{.class_name}}, {{.dao_class}} } = require('../domain/dao/{{.name}}');
{{/each}}

{{#each screen.actions}}
/**
 * Handles the `{{.name}}` action, submitted by:
{{#each .triggers}}
 *   - {{.id}} ("{{.label_str}}")
{{/each}}
 */
async function {{.method_name}}(request, connection) {
  const form = request.body || {};
  // business logic here: {{.name}}
  return { screen: '{{screen.id}}', action: '{{.name}}', form };
}

{{/each}}
module.exports = {
{{#each screen.actions}}
  '{{.name}}': {{.method_name}},
{{/each}}
};
