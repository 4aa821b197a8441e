// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one Emp_Profile row. */
class EmpProfile {
  constructor(row = {}) {
    this.empId = row.emp_id;
    this.name = row.name;
    this.address = row.address;
    this.dob = row.dob;
    this.experience = row.experience;
    this.doj = row.doj;
    this.email = row.email;
    this.mobile = row.mobile;
  }
}

/** Data access for Emp_Profile, captured on the view-profile screen. */
class EmpProfileDao extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO Emp_Profile (emp_id, name, address, dob, experience, doj, email, mobile) VALUES (?, ?, ?, ?, ?, ?, ?, ?)',
      [
        record.empId,
        record.name,
        record.address,
        record.dob,
        record.experience,
        record.doj,
        record.email,
        record.mobile,
      ],
    );
  }

  async findByKey(empId) {
    const rows = await this.query(
      'SELECT emp_id, name, address, dob, experience, doj, email, mobile FROM Emp_Profile WHERE emp_id = ?',
      [empId],
    );
    return rows.length ? new EmpProfile(rows[0]) : null;
  }

  // business logic here: Emp_Profile
}

module.exports = { EmpProfile, EmpProfileDao };
