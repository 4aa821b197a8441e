// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one Emp_Salary row. */
class EmpSalary {
  constructor(row = {}) {
    this.empId = row.emp_id;
    this.designation = row.designation;
    this.basic = row.basic;
    this.da = row.da;
    this.hra = row.hra;
    this.cca = row.cca;
    this.pf = row.pf;
  }
}

/** Data access for Emp_Salary, captured on the view-profile screen. */
class EmpSalaryDao extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO Emp_Salary (emp_id, designation, basic, da, hra, cca, pf) VALUES (?, ?, ?, ?, ?, ?, ?)',
      [
        record.empId,
        record.designation,
        record.basic,
        record.da,
        record.hra,
        record.cca,
        record.pf,
      ],
    );
  }

  async findByKey(empId) {
    const rows = await this.query(
      'SELECT emp_id, designation, basic, da, hra, cca, pf FROM Emp_Salary WHERE emp_id = ?',
      [empId],
    );
    return rows.length ? new EmpSalary(rows[0]) : null;
  }

  // business logic here: Emp_Salary
}

module.exports = { EmpSalary, EmpSalaryDao };
