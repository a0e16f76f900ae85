/**
 * Payload types for the proximity-burden HTTP API.
 *
 * These mirror the JSON the engine serves; the dashboard never computes
 * burden values or class breaks itself, it only displays these fields.
 */
export {};
