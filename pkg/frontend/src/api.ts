/** Thin typed client over the concept-map HTTP API. */

import type { ApiError, ConceptMap, EditOp, NavigationPayload } from './types';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiConflictError extends Error {
  constructor(public detail: ApiError) {
    super(detail.message);
    this.name = 'ApiConflictError';
  }
}

export class ApiRequestError extends Error {
  constructor(public status: number, public detail: ApiError) {
    super(detail.message);
    this.name = 'ApiRequestError';
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.url(path));
    const body = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(response.status, body as ApiError);
    }
    return body as T;
  }

  listVideos(): Promise<{ videos: string[] }> {
    return this.getJson('/api/v1/videos');
  }

  getMap(videoId: string): Promise<ConceptMap> {
    return this.getJson(`/api/v1/videos/${videoId}/map`);
  }

  getNavigation(videoId: string): Promise<NavigationPayload> {
    return this.getJson(`/api/v1/videos/${videoId}/navigation`);
  }

  getSegment(
    videoId: string,
    conceptId: string,
  ): Promise<{ concept_id: string; start_ms: number; end_ms: number; spans: [number, number][] }> {
    return this.getJson(`/api/v1/videos/${videoId}/segment/${conceptId}`);
  }

  async postEdit(videoId: string, op: EditOp): Promise<{ revision: number }> {
    const response = await this.fetchImpl(this.url(`/api/v1/videos/${videoId}/edits`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(op),
    });
    const body = await response.json();
    if (response.status === 409) {
      throw new ApiConflictError(body as ApiError);
    }
    if (!response.ok) {
      throw new ApiRequestError(response.status, body as ApiError);
    }
    return body as { revision: number };
  }
}
