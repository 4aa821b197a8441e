// Generated by hr-portal-reference v1 for hr-portal. Changes are overwritten on regeneration.
'use strict';

/**
 * Superclass of every entity DAO: owns the connection and the query
 * helpers the generated subclasses build on.
 */
class BaseDao {
  constructor(connection) {
    this.connection = connection;
  }

  getConnection() {
    if (!this.connection) {
      throw new Error('no database connection configured');
    }
    return this.connection;
  }

  async query(sql, params) {
    return this.getConnection().query(sql, params);
  }

  // business logic here: shared persistence helpers
}

module.exports = BaseDao;
