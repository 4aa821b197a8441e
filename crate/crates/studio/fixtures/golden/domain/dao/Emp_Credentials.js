// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one Emp_Credentials row. */
class EmpCredentials {
  constructor(row = {}) {
    this.empId = row.emp_id;
    this.password = row.password;
  }
}

/** Data access for Emp_Credentials, captured on the login screen. */
class EmpCredentialsDao extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO Emp_Credentials (emp_id, password) VALUES (?, ?)',
      [
        record.empId,
        record.password,
      ],
    );
  }

  async findByKey(empId) {
    const rows = await this.query(
      'SELECT emp_id, password FROM Emp_Credentials WHERE emp_id = ?',
      [empId],
    );
    return rows.length ? new EmpCredentials(rows[0]) : null;
  }

  // business logic here: Emp_Credentials
}

module.exports = { EmpCredentials, EmpCredentialsDao };
