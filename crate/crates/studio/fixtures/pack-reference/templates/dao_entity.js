// Generated by {{generated_by}} for {{project}}. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one {{entity.table}} row. */
class {{entity.class_name}} {
  constructor(row = {}) {
{{#each entity.columns}}
    this.{{.field}} = row.{{.name}};
{{/each}}
  }
}

/** Data access for {{entity.table}}, captured on the {{entity.screen_id}} screen. */
class {{entity.dao_class}} extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO {{entity.table}} ({{entity.column_list}}) VALUES ({{entity.placeholders}})',
      [
{{#each entity.columns}}
        record.{{.field}},
{{/each}}
      ],
    );
  }

  async findByKey({{entity.pk_field}}) {
    const rows = await this.query(
      'SELECT {{entity.column_list}} FROM {{entity.table}} WHERE {{entity.primary_key}} = ?',
      [{{entity.pk_field}}],
    );
    return rows.length ? new {{entity.class_name}}(rows[0]) : null;
  }

  // business logic here: {{entity.table}}
}

module.exports = { {{entity.class_name}}, {{entity.dao_class}} };
