// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

const BaseDao = require('./base-dao');

/** Value object for one Cand_Int_Results row. */
class CandIntResults {
  constructor(row = {}) {
    this.regnId = row.Regn_id;
    this.interviewDate = row.interview_date;
    this.panel = row.panel;
    this.score = row.score;
    this.result = row.result;
  }
}

/** Data access for Cand_Int_Results, captured on the interview-result screen. */
class CandIntResultsDao extends BaseDao {
  async insert(record) {
    return this.query(
      'INSERT INTO Cand_Int_Results (Regn_id, interview_date, panel, score, result) VALUES (?, ?, ?, ?, ?)',
      [
        record.regnId,
        record.interviewDate,
        record.panel,
        record.score,
        record.result,
      ],
    );
  }

  async findByKey(regnId) {
    const rows = await this.query(
      'SELECT Regn_id, interview_date, panel, score, result FROM Cand_Int_Results WHERE Regn_id = ?',
      [regnId],
    );
    return rows.length ? new CandIntResults(rows[0]) : null;
  }

  // business logic here: Cand_Int_Results
}

module.exports = { CandIntResults, CandIntResultsDao };
