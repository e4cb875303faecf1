// REST client for the medgraph service. All clinical math (z-scores,
// zones, recommendations, rations) comes from the server; this file only
// moves JSON around.

import type { ChartOut, Indicator, Patient, Recommendation, Visit, VisitIn } from './types.js';

export class ApiError extends Error {
    constructor(public status: number, public reason: string) {
        super(`${status}: ${reason}`);
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    constructor(
        private baseUrl: string = '',
        private fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const resp = await this.fetchFn(this.baseUrl + path, init);
        if (!resp.ok) {
            let reason = resp.statusText;
            try {
                const body = await resp.json();
                if (body && typeof body.reason === 'string') reason = body.reason;
            } catch {
                // non-JSON error body: keep the status text
            }
            throw new ApiError(resp.status, reason);
        }
        return (await resp.json()) as T;
    }

    listPatients(): Promise<Patient[]> {
        return this.request('/api/patients');
    }

    createPatient(patient: Omit<Patient, 'id'> & { id?: string }): Promise<Patient> {
        return this.request('/api/patients', {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(patient),
        });
    }

    addVisit(patientId: string, visit: VisitIn): Promise<Visit> {
        return this.request(`/api/patients/${patientId}/visits`, {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify(visit),
        });
    }

    listVisits(patientId: string): Promise<Visit[]> {
        return this.request(`/api/patients/${patientId}/visits`);
    }

    chart(patientId: string, indicator: Indicator, palette: string): Promise<ChartOut> {
        return this.request(
            `/api/patients/${patientId}/chart/${indicator}?palette=${encodeURIComponent(palette)}`,
        );
    }

    async chartSvg(patientId: string, indicator: Indicator, palette: string): Promise<string> {
        const resp = await this.fetchFn(
            `${this.baseUrl}/api/patients/${patientId}/chart/${indicator}?palette=${encodeURIComponent(palette)}`,
            { headers: { accept: 'image/svg+xml' } },
        );
        if (!resp.ok) {
            throw new ApiError(resp.status, await resp.text());
        }
        return resp.text();
    }

    /** Resolves null when the latest visit lacks the needed measures (422). */
    async recommendation(patientId: string): Promise<Recommendation | null> {
        try {
            return await this.request<Recommendation>(`/api/patients/${patientId}/recommendation`);
        } catch (err) {
            if (err instanceof ApiError && err.status === 422) return null;
            throw err;
        }
    }
}
