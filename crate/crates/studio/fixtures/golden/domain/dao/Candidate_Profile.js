// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one Candidate_Profile row. */
class CandidateProfile {
  constructor(row = {}) {
    this.regnId = row.Regn_id;
    this.name = row.name;
    this.address = row.address;
    this.qual = row.qual;
    this.email = row.email;
    this.mobile = row.mobile;
    this.experience = row.experience;
  }
}

/** Data access for Candidate_Profile, captured on the add-candidate screen. */
class CandidateProfileDao extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO Candidate_Profile (Regn_id, name, address, qual, email, mobile, experience) VALUES (?, ?, ?, ?, ?, ?, ?)',
      [
        record.regnId,
        record.name,
        record.address,
        record.qual,
        record.email,
        record.mobile,
        record.experience,
      ],
    );
  }

  async findByKey(regnId) {
    const rows = await this.query(
      'SELECT Regn_id, name, address, qual, email, mobile, experience FROM Candidate_Profile WHERE Regn_id = ?',
      [regnId],
    );
    return rows.length ? new CandidateProfile(rows[0]) : null;
  }

  // business logic here: Candidate_Profile
}

module.exports = { CandidateProfile, CandidateProfileDao };
